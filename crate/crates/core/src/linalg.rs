//! Small dense complex matrix helpers shared by the Hamiltonian and test code.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Spin-1/2 operators `S^a = σ^a/2`.
pub fn spin_operator(axis: crate::state::Axis) -> CMatrix {
    use crate::state::{c, Axis};
    let z = c(0.0, 0.0);
    let data = match axis {
        Axis::X => [z, c(0.5, 0.0), c(0.5, 0.0), z],
        Axis::Y => [z, c(0.0, -0.5), c(0.0, 0.5), z],
        Axis::Z => [c(0.5, 0.0), z, z, c(-0.5, 0.0)],
    };
    CMatrix::from_row_slice(2, 2, &data)
}

/// Embeds a single-qubit operator on `qubit` of an `n`-qubit register
/// (qubit 0 is the leftmost tensor factor).
pub fn embed_single(op: &CMatrix, qubit: usize, n: usize) -> CMatrix {
    let mut out = CMatrix::identity(1, 1);
    for q in 0..n {
        out = if q == qubit {
            kron(&out, op)
        } else {
            kron(&out, &CMatrix::identity(2, 2))
        };
    }
    out
}

/// Largest absolute entry of `a − b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn is_unitary(u: &CMatrix, tol: f64) -> bool {
    u.is_square()
        && max_abs_diff(&(u.adjoint() * u), &CMatrix::identity(u.nrows(), u.ncols())) <= tol
}

pub fn hermiticity_error(h: &CMatrix) -> f64 {
    max_abs_diff(h, &h.adjoint())
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}
