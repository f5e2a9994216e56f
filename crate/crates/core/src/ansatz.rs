//! Layered probe-preparation circuit.
//!
//! Starting from `|0⟩^⊗N` a global `R_y(π/2)` produces `|+⟩^⊗N`. Each layer
//! then applies, in temporal order,
//! `exp(−i t₁ H)`, `R_x(θ₂)`, `R_y(−π/2)`, `exp(−i t₃ H)`, `R_y(π/2)`,
//! with all rotations global.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::DipolarHamiltonian;
use crate::state::{Axis, Rotation, StateVector};

pub const PARAMS_PER_LAYER: usize = 3;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LayerParams {
    pub t1: f64,
    pub theta2: f64,
    pub t3: f64,
}

impl LayerParams {
    pub fn new(t1: f64, theta2: f64, t3: f64) -> Self {
        Self { t1, theta2, t3 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum EvolutionMethod {
    #[default]
    Exact,
    Trotter {
        steps: usize,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsatzConfig {
    pub num_layers: usize,
    #[serde(default)]
    pub evolution: EvolutionMethod,
}

impl AnsatzConfig {
    pub fn exact(num_layers: usize) -> Self {
        Self {
            num_layers,
            evolution: EvolutionMethod::Exact,
        }
    }

    pub fn trotter(num_layers: usize, steps: usize) -> Self {
        Self {
            num_layers,
            evolution: EvolutionMethod::Trotter { steps },
        }
    }

    pub fn num_params(&self) -> usize {
        PARAMS_PER_LAYER * self.num_layers
    }
}

/// Layer-major `(t₁, θ₂, t₃, t₁, …)`.
pub fn flatten_params(params: &[LayerParams]) -> Vec<f64> {
    params.iter().flat_map(|p| [p.t1, p.theta2, p.t3]).collect()
}

pub fn unflatten_params(flat: &[f64]) -> Result<Vec<LayerParams>> {
    if !flat.len().is_multiple_of(PARAMS_PER_LAYER) {
        return Err(Error::Shape(format!(
            "parameter vector of length {} is not a whole number of layers",
            flat.len()
        )));
    }
    Ok(flat
        .chunks_exact(PARAMS_PER_LAYER)
        .map(|c| LayerParams::new(c[0], c[1], c[2]))
        .collect())
}

fn evolve(
    h: &DipolarHamiltonian,
    method: EvolutionMethod,
    state: &mut StateVector,
    t: f64,
) -> Result<()> {
    match method {
        EvolutionMethod::Exact => h.evolve_exact(state, t),
        EvolutionMethod::Trotter { steps } => h.evolve_trotter(state, t, steps),
    }
}

pub fn prepare_probe(
    h: &DipolarHamiltonian,
    config: &AnsatzConfig,
    params: &[LayerParams],
) -> Result<StateVector> {
    if params.len() != config.num_layers {
        return Err(Error::Shape(format!(
            "{} layer parameter sets for a depth-{} ansatz",
            params.len(),
            config.num_layers
        )));
    }
    if params
        .iter()
        .any(|p| !(p.t1.is_finite() && p.theta2.is_finite() && p.t3.is_finite()))
    {
        return Err(Error::Domain("ansatz parameters must be finite".into()));
    }
    let ry_plus = Rotation::global(Axis::Y, FRAC_PI_2);
    let ry_minus = Rotation::global(Axis::Y, -FRAC_PI_2);
    let mut state = StateVector::init_zero(h.num_qubits())?;
    state.apply_rotation(&ry_plus)?;
    for layer in params {
        evolve(h, config.evolution, &mut state, layer.t1)?;
        state.apply_rotation(&Rotation::global(Axis::X, layer.theta2))?;
        state.apply_rotation(&ry_minus)?;
        evolve(h, config.evolution, &mut state, layer.t3)?;
        state.apply_rotation(&ry_plus)?;
    }
    Ok(state)
}

/// [`prepare_probe`] on a flat layer-major parameter vector.
pub fn prepare_probe_flat(
    h: &DipolarHamiltonian,
    config: &AnsatzConfig,
    flat: &[f64],
) -> Result<StateVector> {
    prepare_probe(h, config, &unflatten_params(flat)?)
}
