//! (μ/μ_w, λ)-CMA-ES with cumulative step-size adaptation and combined
//! rank-one / rank-μ covariance updates, run as a maximizer.
//!
//! All candidates of a generation are drawn before any is evaluated, so
//! evaluation may run in parallel without touching the sampling stream.
//! Ranking is by fitness with ties broken by candidate index; non-finite
//! fitness values rank last.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmaConfig {
    /// λ; `None` selects `4 + ⌊3 ln n⌋`.
    #[serde(default)]
    pub population_size: Option<usize>,
    #[serde(default = "default_sigma")]
    pub initial_sigma: f64,
    #[serde(default = "default_max_evaluations")]
    pub max_evaluations: usize,
    /// Stop once the running best improves by less than this over
    /// `10·n` generations.
    #[serde(default = "default_fitness_tolerance")]
    pub fitness_tolerance: f64,
    #[serde(default)]
    pub seed: u64,
    /// Evaluate candidates with rayon.
    #[serde(default = "default_parallel")]
    pub parallel: bool,
}

fn default_sigma() -> f64 {
    0.5
}
fn default_max_evaluations() -> usize {
    20_000
}
fn default_fitness_tolerance() -> f64 {
    1e-12
}
fn default_parallel() -> bool {
    true
}

impl Default for CmaConfig {
    fn default() -> Self {
        Self {
            population_size: None,
            initial_sigma: default_sigma(),
            max_evaluations: default_max_evaluations(),
            fitness_tolerance: default_fitness_tolerance(),
            seed: 0,
            parallel: default_parallel(),
        }
    }
}

pub fn default_population_size(dim: usize) -> usize {
    4 + (3.0 * (dim.max(1) as f64).ln()).floor() as usize
}

impl CmaConfig {
    pub fn lambda(&self, dim: usize) -> usize {
        self.population_size
            .unwrap_or_else(|| default_population_size(dim))
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        let lambda = self.lambda(dim);
        if lambda < 4 {
            return Err(Error::Domain(format!(
                "population size {lambda} is below 4"
            )));
        }
        if !(self.initial_sigma > 0.0 && self.initial_sigma.is_finite()) {
            return Err(Error::Domain("initial sigma must be positive".into()));
        }
        if self.max_evaluations < lambda {
            return Err(Error::Domain(format!(
                "max_evaluations {} is smaller than one generation ({lambda})",
                self.max_evaluations
            )));
        }
        if dim == 0 {
            return Err(Error::Shape(
                "cannot optimize a zero-dimensional problem".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    /// Best fitness among this generation's candidates.
    pub best_fitness: f64,
    /// Running best over everything evaluated so far.
    pub best_so_far: f64,
    pub mean_fitness: f64,
    pub sigma: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    MaxEvaluations,
    Stagnation,
    StepSizeCollapse,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationTrace {
    pub generations: Vec<GenerationRecord>,
    pub best_params: Vec<f64>,
    pub best_fitness: f64,
    pub evaluations: usize,
    pub termination: Termination,
}

impl OptimizationTrace {
    pub fn running_best(&self) -> impl Iterator<Item = f64> + '_ {
        self.generations.iter().map(|g| g.best_so_far)
    }
}

fn rank_key(f: f64) -> f64 {
    if f.is_finite() {
        f
    } else {
        f64::NEG_INFINITY
    }
}

/// Descending by fitness, ascending by index on ties.
fn rank(fitness: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..fitness.len()).collect();
    idx.sort_by(
        |&a, &b| match rank_key(fitness[b]).partial_cmp(&rank_key(fitness[a])) {
            Some(Ordering::Equal) | None => a.cmp(&b),
            Some(o) => o,
        },
    );
    idx
}

struct Strategy {
    dim: usize,
    lambda: usize,
    weights: Vec<f64>,
    mu_eff: f64,
    cc: f64,
    cs: f64,
    c1: f64,
    cmu: f64,
    damps: f64,
    chi_n: f64,
    mean: DVector<f64>,
    sigma: f64,
    pc: DVector<f64>,
    ps: DVector<f64>,
    cov: DMatrix<f64>,
    basis: DMatrix<f64>,
    scales: DVector<f64>,
}

impl Strategy {
    fn new(mean: &[f64], sigma: f64, lambda: usize) -> Self {
        let n = mean.len();
        let nf = n as f64;
        let mu = lambda / 2;
        let raw: Vec<f64> = (0..mu)
            .map(|i| (mu as f64 + 0.5).ln() - ((i + 1) as f64).ln())
            .collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let mu_eff = 1.0 / weights.iter().map(|w| w * w).sum::<f64>();
        let cc = (4.0 + mu_eff / nf) / (nf + 4.0 + 2.0 * mu_eff / nf);
        let cs = (mu_eff + 2.0) / (nf + mu_eff + 5.0);
        let c1 = 2.0 / ((nf + 1.3).powi(2) + mu_eff);
        let cmu =
            (1.0 - c1).min(2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((nf + 2.0).powi(2) + mu_eff));
        let damps = 1.0 + 2.0 * (((mu_eff - 1.0) / (nf + 1.0)).sqrt() - 1.0).max(0.0) + cs;
        let chi_n = nf.sqrt() * (1.0 - 1.0 / (4.0 * nf) + 1.0 / (21.0 * nf * nf));
        Self {
            dim: n,
            lambda,
            weights,
            mu_eff,
            cc,
            cs,
            c1,
            cmu,
            damps,
            chi_n,
            mean: DVector::from_column_slice(mean),
            sigma,
            pc: DVector::zeros(n),
            ps: DVector::zeros(n),
            cov: DMatrix::identity(n, n),
            basis: DMatrix::identity(n, n),
            scales: DVector::from_element(n, 1.0),
        }
    }

    /// Returns `(y_k, x_k)` with `y = B·D·z`, `x = m + σy`.
    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<(DVector<f64>, DVector<f64>)> {
        (0..self.lambda)
            .map(|_| {
                let z = DVector::from_fn(self.dim, |_, _| StandardNormal.sample(rng));
                let y = &self.basis * z.component_mul(&self.scales);
                let x = &self.mean + &y * self.sigma;
                (y, x)
            })
            .collect()
    }

    fn update(&mut self, ys: &[&DVector<f64>], generation: usize) {
        let n = self.dim as f64;
        let mut y_w = DVector::zeros(self.dim);
        for (w, y) in self.weights.iter().zip(ys) {
            y_w += *y * *w;
        }
        self.mean += &y_w * self.sigma;

        let inv_sqrt = &self.basis
            * DMatrix::from_diagonal(&self.scales.map(|d| 1.0 / d))
            * self.basis.transpose();
        self.ps = &self.ps * (1.0 - self.cs)
            + inv_sqrt * &y_w * (self.cs * (2.0 - self.cs) * self.mu_eff).sqrt();
        let ps_norm = self.ps.norm();
        let decay = 1.0 - (1.0 - self.cs).powi(2 * (generation as i32 + 1));
        let hsig = ps_norm / decay.sqrt() / self.chi_n < 1.4 + 2.0 / (n + 1.0);
        let hsig_f = if hsig { 1.0 } else { 0.0 };
        self.pc = &self.pc * (1.0 - self.cc)
            + &y_w * (hsig_f * (self.cc * (2.0 - self.cc) * self.mu_eff).sqrt());

        let mut rank_mu = DMatrix::zeros(self.dim, self.dim);
        for (w, y) in self.weights.iter().zip(ys) {
            rank_mu += (*y * y.transpose()) * *w;
        }
        let keep = 1.0 - self.c1 - self.cmu + (1.0 - hsig_f) * self.c1 * self.cc * (2.0 - self.cc);
        self.cov =
            &self.cov * keep + (&self.pc * self.pc.transpose()) * self.c1 + rank_mu * self.cmu;
        self.cov = (&self.cov + self.cov.transpose()) * 0.5;

        self.sigma *= ((self.cs / self.damps) * (ps_norm / self.chi_n - 1.0)).exp();

        let eig = SymmetricEigen::new(self.cov.clone());
        self.basis = eig.eigenvectors;
        self.scales = eig.eigenvalues.map(|l| l.max(1e-300).sqrt());
    }
}

/// Maximizes `fitness` starting from `initial_mean`. The initial mean is
/// evaluated once before the first generation.
pub fn cma_maximize<F>(
    fitness: F,
    initial_mean: &[f64],
    config: &CmaConfig,
) -> Result<OptimizationTrace>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    cma_maximize_with(fitness, initial_mean, config, &[initial_mean.to_vec()])
}

/// Like [`cma_maximize`], but evaluates `injected` candidates up front. They
/// count toward the evaluation budget and the running best, but do not enter
/// the distribution updates.
pub fn cma_maximize_with<F>(
    fitness: F,
    initial_mean: &[f64],
    config: &CmaConfig,
    injected: &[Vec<f64>],
) -> Result<OptimizationTrace>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let dim = initial_mean.len();
    config.validate(dim)?;
    if injected.iter().any(|c| c.len() != dim) {
        return Err(Error::Shape(
            "injected candidate has the wrong dimension".into(),
        ));
    }
    let lambda = config.lambda(dim);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut strategy = Strategy::new(initial_mean, config.initial_sigma, lambda);

    let mut best_params = initial_mean.to_vec();
    let mut best_fitness = f64::NEG_INFINITY;
    let mut evaluations = 0;
    for cand in injected {
        let f = rank_key(fitness(cand));
        evaluations += 1;
        if f > best_fitness {
            best_fitness = f;
            best_params = cand.clone();
        }
    }

    let window = 10 * dim;
    let mut generations: Vec<GenerationRecord> = Vec::new();
    let termination = loop {
        if evaluations >= config.max_evaluations {
            break Termination::MaxEvaluations;
        }
        let samples = strategy.sample(&mut rng);
        let values: Vec<f64> = if config.parallel {
            samples
                .par_iter()
                .map(|(_, x)| fitness(x.as_slice()))
                .collect()
        } else {
            samples.iter().map(|(_, x)| fitness(x.as_slice())).collect()
        };
        evaluations += lambda;

        let order = rank(&values);
        let top = order[0];
        let gen_best = rank_key(values[top]);
        if gen_best > best_fitness {
            best_fitness = gen_best;
            best_params = samples[top].1.as_slice().to_vec();
        }
        let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
        let mean_fitness = if finite.is_empty() {
            f64::NEG_INFINITY
        } else {
            finite.iter().sum::<f64>() / finite.len() as f64
        };

        let selected: Vec<&DVector<f64>> = order
            .iter()
            .take(strategy.weights.len())
            .map(|&i| &samples[i].0)
            .collect();
        strategy.update(&selected, generations.len());

        generations.push(GenerationRecord {
            best_fitness: gen_best,
            best_so_far: best_fitness,
            mean_fitness,
            sigma: strategy.sigma,
            evaluations,
        });

        let g = generations.len();
        if g > window {
            let earlier = generations[g - 1 - window].best_so_far;
            if best_fitness - earlier < config.fitness_tolerance {
                break Termination::Stagnation;
            }
        }
        let spread = strategy.sigma * strategy.scales.max();
        if spread.is_nan()
            || spread <= 1e-14 * (1.0 + strategy.mean.amax())
            || !strategy.sigma.is_finite()
        {
            break Termination::StepSizeCollapse;
        }
    };

    Ok(OptimizationTrace {
        generations,
        best_params,
        best_fitness,
        evaluations,
        termination,
    })
}
