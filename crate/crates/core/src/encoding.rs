//! Directional phase encoding: qubit `i` picks up the phase `φ_i = α_i θ`
//! through `exp(−iα_iθZ_i/2)`, so the estimated quantity is `q = ‖α‖²θ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EncodingKind {
    Uniform,
    WeightedCentral,
    Custom,
}

impl std::fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EncodingKind::Uniform => "uniform",
            EncodingKind::WeightedCentral => "weighted_central",
            EncodingKind::Custom => "custom",
        })
    }
}

/// Weight vector `α` together with `‖α‖²` and `S = Σ|α_i|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WeightVectorRepr", into = "WeightVectorRepr")]
pub struct WeightVector {
    weights: Vec<f64>,
    kind: EncodingKind,
    norm_sq: f64,
    abs_sum: f64,
}

#[derive(Serialize, Deserialize)]
struct WeightVectorRepr {
    kind: EncodingKind,
    weights: Vec<f64>,
}

impl TryFrom<WeightVectorRepr> for WeightVector {
    type Error = Error;

    fn try_from(r: WeightVectorRepr) -> Result<Self> {
        Self::with_kind(r.weights, r.kind)
    }
}

impl From<WeightVector> for WeightVectorRepr {
    fn from(w: WeightVector) -> Self {
        Self {
            kind: w.kind,
            weights: w.weights,
        }
    }
}

impl WeightVector {
    /// `α_i = 1/N`.
    pub fn uniform(num_qubits: usize) -> Result<Self> {
        if num_qubits < 1 {
            return Err(Error::Domain(
                "uniform encoding needs at least one qubit".into(),
            ));
        }
        Self::with_kind(
            vec![1.0 / num_qubits as f64; num_qubits],
            EncodingKind::Uniform,
        )
    }

    /// `α = (1, 0.5, …, 0.5)` with the central qubit at index 0.
    pub fn weighted_central(num_qubits: usize) -> Result<Self> {
        if num_qubits < 2 {
            return Err(Error::Domain(
                "weighted-central encoding needs at least two qubits".into(),
            ));
        }
        let mut w = vec![0.5; num_qubits];
        w[0] = 1.0;
        Self::with_kind(w, EncodingKind::WeightedCentral)
    }

    /// Any finite real vector with at least one nonzero entry.
    pub fn custom(weights: Vec<f64>) -> Result<Self> {
        Self::with_kind(weights, EncodingKind::Custom)
    }

    pub fn of_kind(kind: EncodingKind, num_qubits: usize) -> Result<Self> {
        match kind {
            EncodingKind::Uniform => Self::uniform(num_qubits),
            EncodingKind::WeightedCentral => Self::weighted_central(num_qubits),
            EncodingKind::Custom => Err(Error::Domain(
                "custom encodings need explicit weights".into(),
            )),
        }
    }

    fn with_kind(weights: Vec<f64>, kind: EncodingKind) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::Domain("weights must be finite".into()));
        }
        let norm_sq: f64 = weights.iter().map(|w| w * w).sum();
        if !(norm_sq.is_finite() && norm_sq > 0.0) {
            return Err(Error::Domain(
                "weight vector must have a nonzero entry".into(),
            ));
        }
        let abs_sum = weights.iter().map(|w| w.abs()).sum();
        Ok(Self {
            weights,
            kind,
            norm_sq,
            abs_sum,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> EncodingKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `‖α‖²`.
    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }

    /// `S = Σ|α_i|`.
    pub fn abs_sum(&self) -> f64 {
        self.abs_sum
    }

    /// `cα` as a custom weight vector.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::custom(self.weights.iter().map(|w| w * factor).collect())
    }

    /// Per-qubit phases `φ_i = α_i θ`.
    pub fn phases(&self, theta: f64) -> Vec<f64> {
        self.weights.iter().map(|w| w * theta).collect()
    }
}

/// Applies `⊗_i exp(−iα_iθZ_i/2)`.
pub fn encode(state: &StateVector, alpha: &WeightVector, theta: f64) -> Result<StateVector> {
    if alpha.len() != state.num_qubits() {
        return Err(Error::Shape(format!(
            "{} weights for a {}-qubit probe",
            alpha.len(),
            state.num_qubits()
        )));
    }
    let mut out = state.clone();
    out.apply_z_phases(&alpha.phases(theta))?;
    Ok(out)
}

/// `q = ‖α‖²θ`.
pub fn effective_q(alpha: &WeightVector, theta: f64) -> f64 {
    alpha.norm_sq * theta
}
