//! Depth-by-depth optimization with warm starts.
//!
//! Depth `ℓ` starts from the depth-`ℓ−1` optimum with three freshly drawn
//! parameters appended for the new layer. The whole `3ℓ`-vector is then
//! optimized (or only the new layer when `freeze_core` is set). The old
//! optimum with an all-zero new layer acts as the identity, so it is
//! evaluated up front and depth `ℓ` can never end below depth `ℓ−1`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cma::{cma_maximize_with, CmaConfig, OptimizationTrace};
use crate::ansatz::{prepare_probe_flat, AnsatzConfig, EvolutionMethod, PARAMS_PER_LAYER};
use crate::encoding::WeightVector;
use crate::error::{Error, Result};
use crate::fisher::{cfi_q, MeasurementSetup};
use crate::hamiltonian::DipolarHamiltonian;

/// Everything needed to score a parameter vector: `F(q)` of the prepared probe.
#[derive(Debug, Clone)]
pub struct SensingProblem {
    pub hamiltonian: DipolarHamiltonian,
    pub alpha: WeightVector,
    pub setup: MeasurementSetup,
    pub evolution: EvolutionMethod,
}

impl SensingProblem {
    pub fn new(
        hamiltonian: DipolarHamiltonian,
        alpha: WeightVector,
        setup: MeasurementSetup,
        evolution: EvolutionMethod,
    ) -> Result<Self> {
        if alpha.len() != hamiltonian.num_qubits() {
            return Err(Error::Shape(format!(
                "{} weights for a {}-qubit Hamiltonian",
                alpha.len(),
                hamiltonian.num_qubits()
            )));
        }
        setup.validate()?;
        Ok(Self {
            hamiltonian,
            alpha,
            setup,
            evolution,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.hamiltonian.num_qubits()
    }

    pub fn ansatz(&self, depth: usize) -> AnsatzConfig {
        AnsatzConfig {
            num_layers: depth,
            evolution: self.evolution,
        }
    }

    /// `F(q)` at the working point for a flat layer-major parameter vector.
    pub fn evaluate(&self, params: &[f64]) -> Result<f64> {
        let depth = params.len() / PARAMS_PER_LAYER;
        let probe = prepare_probe_flat(&self.hamiltonian, &self.ansatz(depth), params)?;
        cfi_q(&probe, &self.alpha, &self.setup)
    }

    /// Fitness for the optimizer; failures map to NaN, which ranks last.
    pub fn fitness(&self, params: &[f64]) -> f64 {
        self.evaluate(params).unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerwiseConfig {
    pub cma: CmaConfig,
    /// New-layer parameters are drawn from `[−scale, scale]`.
    #[serde(default = "default_scale")]
    pub new_layer_scale: f64,
    /// Keep earlier layers fixed for the whole run instead of only at init.
    #[serde(default)]
    pub freeze_core: bool,
}

fn default_scale() -> f64 {
    PI
}

impl Default for LayerwiseConfig {
    fn default() -> Self {
        Self {
            cma: CmaConfig::default(),
            new_layer_scale: PI,
            freeze_core: false,
        }
    }
}

/// Appends three values drawn uniformly from `[−scale, scale]`.
pub fn warm_start_extend(
    prev_best: &[f64],
    rng_seed: u64,
    new_layer_scale: f64,
) -> Result<Vec<f64>> {
    if !prev_best.len().is_multiple_of(PARAMS_PER_LAYER) {
        return Err(Error::Shape(format!(
            "warm start from {} parameters, not a whole number of layers",
            prev_best.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut out = prev_best.to_vec();
    for _ in 0..PARAMS_PER_LAYER {
        out.push(if new_layer_scale > 0.0 {
            rng.random_range(-new_layer_scale..=new_layer_scale)
        } else {
            0.0
        });
    }
    Ok(out)
}

/// Mixes a run seed with a depth and stream tag (splitmix64 finalizer).
pub fn derive_seed(seed: u64, depth: usize, stream: u64) -> u64 {
    let mut z = seed
        .wrapping_add((depth as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(stream.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthResult {
    pub depth: usize,
    /// Full `3·depth` parameter vector of the best probe.
    pub best_params: Vec<f64>,
    pub best_fitness: f64,
    pub trace: OptimizationTrace,
}

pub fn layerwise_optimize(
    problem: &SensingProblem,
    max_depth: usize,
    config: &LayerwiseConfig,
) -> Result<Vec<DepthResult>> {
    if max_depth < 1 {
        return Err(Error::Domain("max_depth must be at least 1".into()));
    }
    let mut results: Vec<DepthResult> = Vec::with_capacity(max_depth);
    let mut prev: Vec<f64> = Vec::new();
    for depth in 1..=max_depth {
        let mean = warm_start_extend(
            &prev,
            derive_seed(config.cma.seed, depth, 1),
            config.new_layer_scale,
        )?;
        let mut identity = prev.clone();
        identity.extend([0.0; PARAMS_PER_LAYER]);
        let cma = CmaConfig {
            seed: derive_seed(config.cma.seed, depth, 2),
            ..config.cma.clone()
        };

        let (best_params, trace) = if config.freeze_core {
            let core = prev.clone();
            let full = |tail: &[f64]| -> Vec<f64> { core.iter().chain(tail).copied().collect() };
            let trace = cma_maximize_with(
                |x| problem.fitness(&full(x)),
                &mean[prev.len()..],
                &cma,
                &[mean[prev.len()..].to_vec(), vec![0.0; PARAMS_PER_LAYER]],
            )?;
            (full(&trace.best_params), trace)
        } else {
            let trace = cma_maximize_with(
                |x| problem.fitness(x),
                &mean,
                &cma,
                &[mean.clone(), identity],
            )?;
            (trace.best_params.clone(), trace)
        };
        if !trace.best_fitness.is_finite() {
            return Err(Error::Numerical(format!(
                "no finite fitness found at depth {depth}"
            )));
        }
        prev = best_params.clone();
        results.push(DepthResult {
            depth,
            best_params,
            best_fitness: trace.best_fitness,
            trace,
        });
    }
    Ok(results)
}
