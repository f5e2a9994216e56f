use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use varsense_bench::{hamiltonian, params};
use varsense_core::{
    cma_maximize, directional_cfi, prepare_probe_flat, AnsatzConfig, CmaConfig, MeasurementSetup,
    WeightVector,
};

fn probe(c: &mut Criterion) {
    let mut g = c.benchmark_group("prepare_probe");
    for n in [3, 5, 7] {
        let h = hamiltonian(n);
        let p = params(3);
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| prepare_probe_flat(&h, &AnsatzConfig::exact(3), black_box(&p)).unwrap())
        });
    }
    g.finish();
}

fn cfi(c: &mut Criterion) {
    let mut g = c.benchmark_group("directional_cfi");
    let setup = MeasurementSetup::default();
    for n in [3, 5, 7] {
        let h = hamiltonian(n);
        let state = prepare_probe_flat(&h, &AnsatzConfig::exact(3), &params(3)).unwrap();
        let alpha = WeightVector::uniform(n).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| directional_cfi(black_box(&state), &alpha, setup.theta0, &setup).unwrap())
        });
    }
    g.finish();
}

fn cma(c: &mut Criterion) {
    let cfg = CmaConfig {
        max_evaluations: 2000,
        seed: 7,
        parallel: false,
        ..CmaConfig::default()
    };
    c.bench_function("cma_sphere_6d", |b| {
        b.iter(|| {
            cma_maximize(
                |x: &[f64]| -x.iter().map(|v| (v - 1.0).powi(2)).sum::<f64>(),
                &[0.0; 6],
                &cfg,
            )
            .unwrap()
        })
    });
}

criterion_group!(benches, probe, cfi, cma);
criterion_main!(benches);
