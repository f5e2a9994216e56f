//! Benchmark fixtures shared by the criterion targets.

use varsense_core::{CouplingConstants, DipolarHamiltonian, Lattice};

/// Polygon lattice of `n` qubits with unit couplings.
pub fn hamiltonian(n: usize) -> DipolarHamiltonian {
    DipolarHamiltonian::build(
        &Lattice::polygon(n, 1.0).unwrap(),
        &CouplingConstants::new(1.0, 1.0),
    )
    .unwrap()
}

/// Deterministic layer-major parameters for a depth-`depth` ansatz.
pub fn params(depth: usize) -> Vec<f64> {
    (0..3 * depth).map(|k| 0.3 + 0.17 * k as f64).collect()
}
