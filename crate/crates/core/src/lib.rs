//! Variational probe-state design for sensing a weighted sum of local phases.
//!
//! The crate simulates small spin-1/2 registers coupled by a dipolar
//! interaction, prepares probes with a layered ansatz, imprints the phases
//! `φ_i = α_i θ`, scores probes by the Classical Fisher Information of the
//! readout with respect to `q = ‖α‖²θ`, and maximizes that score with CMA-ES.
//!
//! Conventions shared by every module:
//! - qubit 0 is the most significant bit of a basis index and the central
//!   lattice site;
//! - `R_a(θ) = exp(−iθσ_a/2)`.

pub mod ansatz;
pub mod bounds;
pub mod encoding;
pub mod error;
pub mod fisher;
pub mod hamiltonian;
pub mod lattice;
pub mod linalg;
pub mod optimizer;
pub mod state;

pub use ansatz::{
    flatten_params, prepare_probe, prepare_probe_flat, unflatten_params, AnsatzConfig,
    EvolutionMethod, LayerParams,
};
pub use bounds::{bounds_table, ee_bound, sql_bound, BoundsRow};
pub use encoding::{effective_q, encode, EncodingKind, WeightVector};
pub use error::{Error, Result};
pub use fisher::{
    directional_cfi, outcome_probabilities, phase_partials, CfiReport, MeasurementSetup,
};
pub use hamiltonian::{CouplingConstants, DipolarHamiltonian};
pub use lattice::{coupling_strength, BiasField, CouplingLaw, Lattice};
pub use optimizer::{
    cma_maximize, layerwise_optimize, warm_start_extend, CmaConfig, LayerwiseConfig,
    OptimizationTrace, SensingProblem,
};
pub use state::{Axis, GhzFidelity, Rotation, StateVector, Target};
