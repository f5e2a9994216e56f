//! Gradient-free maximization of `F(q)` over ansatz parameters.

pub mod cma;
pub mod layerwise;

pub use cma::{
    cma_maximize, cma_maximize_with, CmaConfig, GenerationRecord, OptimizationTrace, Termination,
};
pub use layerwise::{
    derive_seed, layerwise_optimize, warm_start_extend, DepthResult, LayerwiseConfig,
    SensingProblem,
};
