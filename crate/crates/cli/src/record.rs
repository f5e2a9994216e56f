//! Persisted run results (JSON).

use std::path::Path;

use serde::{Deserialize, Serialize};
use varsense_core::optimizer::Termination;
use varsense_core::{CfiReport, EncodingKind, OptimizationTrace};

use crate::config::RunConfig;
use crate::error::HarnessError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub generations: usize,
    pub evaluations: usize,
    pub final_sigma: f64,
    pub termination: Termination,
}

impl From<&OptimizationTrace> for TraceSummary {
    fn from(t: &OptimizationTrace) -> Self {
        Self {
            generations: t.generations.len(),
            evaluations: t.evaluations,
            final_sigma: t.generations.last().map_or(0.0, |g| g.sigma),
            termination: t.termination,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessPoint {
    pub theta0: f64,
    pub cfi_q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellOutcome {
    pub cfi_q: f64,
    pub cfi_theta: f64,
    pub fidelity_raw: f64,
    pub fidelity_phase_optimized: f64,
    pub best_params: Vec<f64>,
    pub robustness: Vec<RobustnessPoint>,
    pub trace: TraceSummary,
}

/// One `(N, depth)` cell. Bounds are stored with every cell so ratios can
/// be formed without recomputation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub num_qubits: usize,
    pub depth: usize,
    pub sql: f64,
    pub ee: f64,
    #[serde(flatten)]
    pub outcome: CellStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CellStatus {
    Ok(CellOutcome),
    Error { message: String },
}

impl CellResult {
    pub fn ok(&self) -> Option<&CellOutcome> {
        match &self.outcome {
            CellStatus::Ok(o) => Some(o),
            CellStatus::Error { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub code_version: String,
    pub started_at: String,
    pub finished_at: String,
    pub encoding: EncodingKind,
    pub config: RunConfig,
    pub cells: Vec<CellResult>,
}

impl RunRecord {
    pub fn cell(&self, n: usize, depth: usize) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| c.num_qubits == n && c.depth == depth)
    }

    pub fn save(&self, path: &Path) -> Result<(), HarnessError> {
        let text =
            serde_json::to_string_pretty(self).map_err(|e| HarnessError::Runtime(e.to_string()))?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ProbeSource {
    /// Probe prepared by the ansatz from the supplied parameters.
    Ansatz,
    /// `(|0…0⟩ + |1…1⟩)/√2`, bypassing the ansatz.
    Ghz,
    /// `|+⟩^⊗N`, bypassing the ansatz.
    Product,
}

/// Single-point evaluation of one probe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub code_version: String,
    pub created_at: String,
    pub num_qubits: usize,
    pub depth: usize,
    pub probe: ProbeSource,
    pub theta0: f64,
    pub params: Vec<f64>,
    pub sql: f64,
    pub ee: f64,
    pub fidelity_raw: f64,
    pub fidelity_phase_optimized: f64,
    pub report: CfiReport,
}
