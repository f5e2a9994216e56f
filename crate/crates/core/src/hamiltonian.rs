//! Dipolar interaction Hamiltonian
//! `H = Σ_{i<j} V_ij (J_I S_i^z S_j^z + J_S S⃗_i·S⃗_j)` and its propagators.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{CouplingLaw, Lattice};
use crate::linalg::{kron, spin_operator, CMatrix};
use crate::state::{c, Axis, StateVector};

/// Coupling constants entering the Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingConstants {
    /// Ising coupling `J_I`.
    pub j_ising: f64,
    /// Isotropic (Heisenberg) coupling `J_S`.
    pub j_symmetric: f64,
    /// Overall dipolar prefactor `κ`.
    pub prefactor: f64,
    #[serde(default)]
    pub law: CouplingLaw,
}

impl CouplingConstants {
    pub fn new(j_ising: f64, j_symmetric: f64) -> Self {
        Self {
            j_ising,
            j_symmetric,
            prefactor: 1.0,
            law: CouplingLaw::default(),
        }
    }
}

/// Immutable Hamiltonian with its cached eigendecomposition `H = U Λ U†`.
#[derive(Debug, Clone)]
pub struct DipolarHamiltonian {
    num_qubits: usize,
    couplings: DMatrix<f64>,
    j_ising: f64,
    j_symmetric: f64,
    matrix: CMatrix,
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
    eigenvectors_adj: CMatrix,
}

fn pair_operator(n: usize, i: usize, j: usize, axis: Axis) -> CMatrix {
    let s = spin_operator(axis);
    let id = CMatrix::identity(2, 2);
    (0..n).fold(CMatrix::identity(1, 1), |acc, q| {
        kron(&acc, if q == i || q == j { &s } else { &id })
    })
}

impl DipolarHamiltonian {
    pub fn build(lattice: &Lattice, constants: &CouplingConstants) -> Result<Self> {
        let v = lattice.coupling_matrix(constants.prefactor, constants.law)?;
        Self::from_couplings(v, constants.j_ising, constants.j_symmetric)
    }

    /// Builds from an explicit symmetric coupling matrix (diagonal ignored).
    pub fn from_couplings(couplings: DMatrix<f64>, j_ising: f64, j_symmetric: f64) -> Result<Self> {
        let n = couplings.nrows();
        if couplings.ncols() != n {
            return Err(Error::Shape("coupling matrix must be square".into()));
        }
        if !(2..=crate::state::MAX_QUBITS).contains(&n) {
            return Err(Error::ResourceLimit {
                requested: n,
                max: crate::state::MAX_QUBITS,
            });
        }
        for i in 0..n {
            for j in 0..n {
                if (couplings[(i, j)] - couplings[(j, i)]).abs() > 1e-12 {
                    return Err(Error::Domain("coupling matrix must be symmetric".into()));
                }
            }
        }
        let dim = 1usize << n;
        let mut matrix = CMatrix::zeros(dim, dim);
        for i in 0..n {
            for j in i + 1..n {
                let vij = couplings[(i, j)];
                if vij == 0.0 {
                    continue;
                }
                let zz = pair_operator(n, i, j, Axis::Z);
                matrix += &zz * c(vij * (j_ising + j_symmetric), 0.0);
                if j_symmetric != 0.0 {
                    let xx = pair_operator(n, i, j, Axis::X);
                    let yy = pair_operator(n, i, j, Axis::Y);
                    matrix += (xx + yy) * c(vij * j_symmetric, 0.0);
                }
            }
        }
        let eig = SymmetricEigen::new(matrix.clone());
        let eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let eigenvectors = eig.eigenvectors;
        let eigenvectors_adj = eigenvectors.adjoint();
        Ok(Self {
            num_qubits: n,
            couplings,
            j_ising,
            j_symmetric,
            matrix,
            eigenvalues,
            eigenvectors,
            eigenvectors_adj,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn couplings(&self) -> &DMatrix<f64> {
        &self.couplings
    }

    pub fn j_ising(&self) -> f64 {
        self.j_ising
    }

    pub fn j_symmetric(&self) -> f64 {
        self.j_symmetric
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    fn phases(&self, t: f64) -> Vec<Complex64> {
        self.eigenvalues
            .iter()
            .map(|&l| Complex64::from_polar(1.0, -l * t))
            .collect()
    }

    /// `exp(−itH) = U diag(e^{−iλt}) U†`.
    pub fn exact_propagator(&self, t: f64) -> CMatrix {
        let mut scaled = self.eigenvectors.clone();
        for (mut col, ph) in scaled.column_iter_mut().zip(self.phases(t)) {
            col *= ph;
        }
        scaled * &self.eigenvectors_adj
    }

    /// Applies `exp(−itH)` to a state without forming the propagator.
    pub fn evolve_exact(&self, state: &mut StateVector, t: f64) -> Result<()> {
        self.check_state(state)?;
        let amps = nalgebra::DVector::from_column_slice(state.amplitudes());
        let mut rotated = &self.eigenvectors_adj * amps;
        for (a, ph) in rotated.iter_mut().zip(self.phases(t)) {
            *a *= ph;
        }
        let out = &self.eigenvectors * rotated;
        *state = StateVector::from_amplitudes(self.num_qubits, out.iter().copied().collect())
            .map_err(|e| Error::Numerical(format!("exact evolution lost normalization: {e}")))?;
        Ok(())
    }

    /// Applies the first-order product formula with `steps` slices. Within a
    /// slice the pair terms run in lexicographic `(i<j)` order, Ising factor
    /// first, then the isotropic factor; each factor is an exact 4×4 exponential.
    pub fn evolve_trotter(&self, state: &mut StateVector, t: f64, steps: usize) -> Result<()> {
        self.check_state(state)?;
        if steps < 1 {
            return Err(Error::Domain("trotter steps must be at least 1".into()));
        }
        let dt = t / steps as f64;
        let gates = self.trotter_gates(dt);
        for _ in 0..steps {
            for (i, j, gate) in &gates {
                state.apply_two_qubit(*i, *j, gate)?;
            }
        }
        Ok(())
    }

    fn trotter_gates(&self, dt: f64) -> Vec<(usize, usize, [[Complex64; 4]; 4])> {
        let n = self.num_qubits;
        let mut gates = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let vij = self.couplings[(i, j)];
                if vij == 0.0 {
                    continue;
                }
                if self.j_ising != 0.0 {
                    gates.push((i, j, ising_gate(dt * vij * self.j_ising)));
                }
                if self.j_symmetric != 0.0 {
                    gates.push((i, j, exchange_gate(dt * vij * self.j_symmetric)));
                }
            }
        }
        gates
    }

    /// Dense first-order Trotter propagator.
    pub fn trotter_propagator(&self, t: f64, steps: usize) -> Result<CMatrix> {
        let dim = 1usize << self.num_qubits;
        let mut out = CMatrix::zeros(dim, dim);
        for col in 0..dim {
            let mut basis = vec![c(0.0, 0.0); dim];
            basis[col] = c(1.0, 0.0);
            let mut s = StateVector::from_amplitudes(self.num_qubits, basis)?;
            self.evolve_trotter(&mut s, t, steps)?;
            for (row, a) in s.amplitudes().iter().enumerate() {
                out[(row, col)] = *a;
            }
        }
        Ok(out)
    }

    fn check_state(&self, state: &StateVector) -> Result<()> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::Shape(format!(
                "{}-qubit state evolved under a {}-qubit Hamiltonian",
                state.num_qubits(),
                self.num_qubits
            )));
        }
        Ok(())
    }
}

/// `exp(−i a S^z⊗S^z)`.
pub fn ising_gate(a: f64) -> [[Complex64; 4]; 4] {
    let o = c(0.0, 0.0);
    let even = Complex64::from_polar(1.0, -a / 4.0);
    let odd = Complex64::from_polar(1.0, a / 4.0);
    [
        [even, o, o, o],
        [o, odd, o, o],
        [o, o, odd, o],
        [o, o, o, even],
    ]
}

/// `exp(−i b S⃗⊗S⃗)`: phase `e^{−ib/4}` on the triplet, `e^{3ib/4}` on the singlet.
pub fn exchange_gate(b: f64) -> [[Complex64; 4]; 4] {
    let o = c(0.0, 0.0);
    let t = Complex64::from_polar(1.0, -b / 4.0);
    let s = Complex64::from_polar(1.0, 3.0 * b / 4.0);
    let d = (t + s) * 0.5;
    let f = (t - s) * 0.5;
    [[t, o, o, o], [o, d, f, o], [o, f, d, o], [o, o, o, t]]
}
