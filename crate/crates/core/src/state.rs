//! Dense pure-state simulation of small qubit registers.
//!
//! Amplitudes are stored over the `2^N` computational basis states with
//! qubit 0 as the most significant bit: basis index `k` has qubit `q` in
//! state `(k >> (N - 1 - q)) & 1`.
//!
//! Rotations follow `R_a(θ) = exp(−iθσ_a/2)`. Global phase is kept as is.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 12;

const NORM_TOL: f64 = 1e-10;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Rotation axis on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Which qubits a rotation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Qubit(usize),
    Global,
}

/// A single-qubit rotation `exp(−i·angle·σ_axis/2)`, applied either to one
/// qubit or identically to every qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    pub axis: Axis,
    pub angle: f64,
    pub target: Target,
}

impl Rotation {
    pub fn global(axis: Axis, angle: f64) -> Self {
        Self {
            axis,
            angle,
            target: Target::Global,
        }
    }

    pub fn single(axis: Axis, angle: f64, qubit: usize) -> Self {
        Self {
            axis,
            angle,
            target: Target::Qubit(qubit),
        }
    }

    /// The 2×2 matrix in row-major order `[[m00, m01], [m10, m11]]`.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        rotation_matrix(self.axis, self.angle)
    }
}

pub fn rotation_matrix(axis: Axis, angle: f64) -> [[Complex64; 2]; 2] {
    let (s, co) = (angle / 2.0).sin_cos();
    match axis {
        Axis::X => [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]],
        Axis::Y => [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]],
        Axis::Z => [[c(co, -s), c(0.0, 0.0)], [c(0.0, 0.0), c(co, s)]],
    }
}

/// Overlap of the state with `|GHZ_N⟩ = (|0…0⟩ + |1…1⟩)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GhzFidelity {
    /// `|⟨GHZ_N|ψ⟩|²` with the fixed `+` relative phase.
    pub raw: f64,
    /// Maximum of the fidelity over the relative phase of the two GHZ branches.
    pub phase_optimized: f64,
}

/// Normalized amplitudes of an `N`-qubit pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

fn check_size(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 || num_qubits > MAX_QUBITS {
        return Err(Error::ResourceLimit {
            requested: num_qubits,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

impl StateVector {
    /// `|0⟩^⊗N`.
    pub fn init_zero(num_qubits: usize) -> Result<Self> {
        check_size(num_qubits)?;
        let mut amplitudes = vec![Complex64::default(); 1 << num_qubits];
        amplitudes[0] = c(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// `|+⟩^⊗N`, the uniform real superposition.
    pub fn plus(num_qubits: usize) -> Result<Self> {
        check_size(num_qubits)?;
        let dim = 1usize << num_qubits;
        let a = c((dim as f64).sqrt().recip(), 0.0);
        Ok(Self {
            num_qubits,
            amplitudes: vec![a; dim],
        })
    }

    /// `(|0…0⟩ + e^{iφ}|1…1⟩)/√2`.
    pub fn ghz_with_phase(num_qubits: usize, relative_phase: f64) -> Result<Self> {
        let mut s = Self::init_zero(num_qubits)?;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let last = s.amplitudes.len() - 1;
        s.amplitudes[0] = c(h, 0.0);
        s.amplitudes[last] = Complex64::from_polar(h, relative_phase);
        Ok(s)
    }

    pub fn ghz(num_qubits: usize) -> Result<Self> {
        Self::ghz_with_phase(num_qubits, 0.0)
    }

    /// Wraps amplitudes that are already normalized within `1e-10`.
    pub fn from_amplitudes(num_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_size(num_qubits)?;
        if amplitudes.len() != 1 << num_qubits {
            return Err(Error::Shape(format!(
                "expected {} amplitudes for {} qubits, got {}",
                1usize << num_qubits,
                num_qubits,
                amplitudes.len()
            )));
        }
        let s = Self {
            num_qubits,
            amplitudes,
        };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Domain(format!("state norm² {norm} is not 1")));
        }
        Ok(s)
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(num_qubits: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Domain(
                "cannot normalize a zero or non-finite vector".into(),
            ));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::from_amplitudes(num_qubits, amplitudes)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    #[inline]
    fn bit_mask(&self, qubit: usize) -> usize {
        1 << (self.num_qubits - 1 - qubit)
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::Index {
                index: qubit,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    fn apply_single_unchecked(&mut self, qubit: usize, m: &[[Complex64; 2]; 2]) {
        let mask = self.bit_mask(qubit);
        for k in 0..self.amplitudes.len() {
            if k & mask == 0 {
                let a0 = self.amplitudes[k];
                let a1 = self.amplitudes[k | mask];
                self.amplitudes[k] = m[0][0] * a0 + m[0][1] * a1;
                self.amplitudes[k | mask] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    /// Applies an arbitrary 2×2 matrix to one qubit.
    pub fn apply_single_qubit(&mut self, qubit: usize, m: &[[Complex64; 2]; 2]) -> Result<()> {
        self.check_qubit(qubit)?;
        self.apply_single_unchecked(qubit, m);
        Ok(())
    }

    pub fn apply_rotation(&mut self, rot: &Rotation) -> Result<()> {
        let m = rot.matrix();
        match rot.target {
            Target::Qubit(q) => self.apply_single_qubit(q, &m),
            Target::Global => {
                for q in 0..self.num_qubits {
                    self.apply_single_unchecked(q, &m);
                }
                Ok(())
            }
        }
    }

    /// Non-mutating form of [`StateVector::apply_rotation`].
    pub fn rotated(&self, rot: &Rotation) -> Result<Self> {
        let mut out = self.clone();
        out.apply_rotation(rot)?;
        Ok(out)
    }

    /// Applies a 4×4 matrix to the ordered qubit pair `(first, second)`, with
    /// `first` as the more significant bit of the local 2-qubit index.
    pub fn apply_two_qubit(
        &mut self,
        first: usize,
        second: usize,
        m: &[[Complex64; 4]; 4],
    ) -> Result<()> {
        self.check_qubit(first)?;
        self.check_qubit(second)?;
        if first == second {
            return Err(Error::Domain("two-qubit gate needs distinct qubits".into()));
        }
        let (ma, mb) = (self.bit_mask(first), self.bit_mask(second));
        for k in 0..self.amplitudes.len() {
            if k & ma != 0 || k & mb != 0 {
                continue;
            }
            let idx = [k, k | mb, k | ma, k | ma | mb];
            let v = idx.map(|i| self.amplitudes[i]);
            for (r, &i) in idx.iter().enumerate() {
                self.amplitudes[i] = (0..4).map(|col| m[r][col] * v[col]).sum();
            }
        }
        Ok(())
    }

    /// Applies `⊗_i R_z(φ_i)` where `phases[i] = φ_i`.
    pub fn apply_z_phases(&mut self, phases: &[f64]) -> Result<()> {
        if phases.len() != self.num_qubits {
            return Err(Error::Shape(format!(
                "{} phases for a {}-qubit register",
                phases.len(),
                self.num_qubits
            )));
        }
        let n = self.num_qubits;
        for (k, a) in self.amplitudes.iter_mut().enumerate() {
            // bit 0 picks up e^{-iφ/2}, bit 1 picks up e^{+iφ/2}
            let angle: f64 = phases
                .iter()
                .enumerate()
                .map(|(q, &p)| {
                    if (k >> (n - 1 - q)) & 1 == 1 {
                        0.5 * p
                    } else {
                        -0.5 * p
                    }
                })
                .sum();
            *a *= Complex64::from_polar(1.0, angle);
        }
        Ok(())
    }

    /// `amplitudes ← u · amplitudes`.
    pub fn apply_dense_unitary(&mut self, u: &DMatrix<Complex64>) -> Result<()> {
        let dim = self.dim();
        if u.nrows() != dim || u.ncols() != dim {
            return Err(Error::Shape(format!(
                "{}×{} matrix applied to a state of dimension {dim}",
                u.nrows(),
                u.ncols()
            )));
        }
        let out: Vec<Complex64> = (0..dim)
            .map(|r| {
                u.row(r)
                    .iter()
                    .zip(&self.amplitudes)
                    .map(|(x, a)| x * a)
                    .sum()
            })
            .collect();
        self.amplitudes = out;
        Ok(())
    }

    /// Like [`StateVector::apply_dense_unitary`], but first verifies
    /// `‖U†U − I‖_max ≤ 1e-10`.
    pub fn apply_dense_unitary_checked(&mut self, u: &DMatrix<Complex64>) -> Result<()> {
        if u.is_square() && !crate::linalg::is_unitary(u, 1e-10) {
            return Err(Error::Numerical(
                "matrix is not unitary within 1e-10".into(),
            ));
        }
        self.apply_dense_unitary(u)
    }

    /// Computational-basis outcome probabilities `|a_k|²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::Shape(
                "inner product of states with different dimension".into(),
            ));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn ghz_fidelity(&self) -> GhzFidelity {
        let a0 = self.amplitudes[0];
        let a1 = self.amplitudes[self.dim() - 1];
        GhzFidelity {
            raw: ((a0 + a1) * std::f64::consts::FRAC_1_SQRT_2).norm_sqr(),
            phase_optimized: (a0.norm() + a1.norm()).powi(2) / 2.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn assert_states_close(a: &StateVector, b: &StateVector, tol: f64) {
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x - y).norm() < tol, "{x} vs {y}");
        }
    }

    #[test]
    fn zero_state() {
        let s = StateVector::init_zero(1).unwrap();
        assert_eq!(s.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);
        let s = StateVector::init_zero(2).unwrap();
        assert_eq!(s.probabilities(), vec![1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(
            StateVector::init_zero(13),
            Err(Error::ResourceLimit { requested: 13, .. })
        ));
        assert!(StateVector::init_zero(0).is_err());
        assert_eq!(StateVector::init_zero(12).unwrap().dim(), 4096);
    }

    #[test]
    fn global_ry_half_pi_gives_plus() {
        let mut s = StateVector::init_zero(3).unwrap();
        s.apply_rotation(&Rotation::global(Axis::Y, FRAC_PI_2))
            .unwrap();
        assert_states_close(&s, &StateVector::plus(3).unwrap(), 1e-12);
    }

    #[test]
    fn zero_angle_is_identity() {
        let s = StateVector::normalized(
            2,
            vec![c(0.1, 0.2), c(0.3, -0.4), c(0.5, 0.0), c(-0.2, 0.6)],
        )
        .unwrap();
        let r = s.rotated(&Rotation::global(Axis::X, 0.0)).unwrap();
        assert_eq!(s, r);
    }

    #[test]
    fn rz_on_zero() {
        let phi = 0.7;
        let mut s = StateVector::init_zero(1).unwrap();
        s.apply_rotation(&Rotation::single(Axis::Z, phi, 0))
            .unwrap();
        assert_abs_diff_eq!(s.amplitudes()[0].re, (phi / 2.0).cos(), epsilon = 1e-14);
        assert_abs_diff_eq!(s.amplitudes()[0].im, -(phi / 2.0).sin(), epsilon = 1e-14);
        assert_eq!(s.probabilities()[0], 1.0);
    }

    #[test]
    fn rotation_target_out_of_range() {
        let mut s = StateVector::init_zero(2).unwrap();
        let err = s
            .apply_rotation(&Rotation::single(Axis::X, 1.0, 2))
            .unwrap_err();
        assert_eq!(
            err,
            Error::Index {
                index: 2,
                num_qubits: 2
            }
        );
    }

    #[test]
    fn rotation_matrices_are_unitary() {
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            for angle in [-2.3, 0.0, 0.4, PI, 5.1] {
                let m = rotation_matrix(axis, angle);
                for i in 0..2 {
                    for j in 0..2 {
                        let v: Complex64 = (0..2).map(|k| m[k][i].conj() * m[k][j]).sum();
                        let expect = if i == j { 1.0 } else { 0.0 };
                        assert!((v - expect).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn dense_unitary_examples() {
        let mut s = StateVector::init_zero(1).unwrap();
        let x =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        s.apply_dense_unitary(&x).unwrap();
        assert_eq!(s.amplitudes(), &[c(0.0, 0.0), c(1.0, 0.0)]);

        let before = StateVector::plus(2).unwrap();
        let mut after = before.clone();
        after.apply_dense_unitary(&DMatrix::identity(4, 4)).unwrap();
        assert_eq!(before, after);

        let err = after
            .apply_dense_unitary(&DMatrix::identity(2, 2))
            .unwrap_err();
        assert!(matches!(err, Error::Shape(_)));

        let not_unitary = DMatrix::from_element(4, 4, c(1.0, 0.0));
        assert!(after.apply_dense_unitary_checked(&not_unitary).is_err());
    }

    #[test]
    fn probability_examples() {
        let p = StateVector::plus(2).unwrap().probabilities();
        for v in p {
            assert_abs_diff_eq!(v, 0.25, epsilon = 1e-15);
        }
        let p = StateVector::ghz(2).unwrap().probabilities();
        assert_abs_diff_eq!(p[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p[3], 0.5, epsilon = 1e-15);
        assert_eq!(p[1] + p[2], 0.0);
    }

    #[test]
    fn ghz_fidelity_examples() {
        for n in 1..=5 {
            let f = StateVector::ghz(n).unwrap().ghz_fidelity();
            assert_abs_diff_eq!(f.raw, 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(f.phase_optimized, 1.0, epsilon = 1e-14);
        }
        let f = StateVector::ghz_with_phase(3, FRAC_PI_2)
            .unwrap()
            .ghz_fidelity();
        assert_abs_diff_eq!(f.raw, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(f.phase_optimized, 1.0, epsilon = 1e-14);

        // |+>^3: a0 = a7 = 1/sqrt(8), overlap (2/sqrt 8)/sqrt 2 = 1/2
        let f = StateVector::plus(3).unwrap().ghz_fidelity();
        let oracle = (2.0 / (8f64.sqrt() * 2f64.sqrt())).powi(2);
        assert_abs_diff_eq!(f.raw, oracle, epsilon = 1e-14);
        assert_abs_diff_eq!(f.raw, 0.25, epsilon = 1e-14);
    }

    #[test]
    fn two_qubit_gate_matches_ordering() {
        // CNOT with control = first
        let o = c(0.0, 0.0);
        let l = c(1.0, 0.0);
        let cnot = [[l, o, o, o], [o, l, o, o], [o, o, o, l], [o, o, l, o]];
        let mut s = StateVector::init_zero(3).unwrap();
        s.apply_rotation(&Rotation::single(Axis::Y, PI, 2)).unwrap(); // |001>
        s.apply_two_qubit(2, 0, &cnot).unwrap(); // control qubit 2 flips qubit 0
        assert_abs_diff_eq!(s.probabilities()[0b101], 1.0, epsilon = 1e-14);
        assert!(s.apply_two_qubit(1, 1, &cnot).is_err());
    }

    #[test]
    fn ghz_amplitudes() {
        let s = StateVector::ghz(2).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[0].re, FRAC_1_SQRT_2);
        assert_abs_diff_eq!(s.amplitudes()[3].re, FRAC_1_SQRT_2);
    }

    fn arb_state(n: usize) -> impl Strategy<Value = StateVector> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
            .prop_filter_map("nonzero", move |v| {
                StateVector::normalized(n, v.into_iter().map(|(a, b)| c(a, b)).collect()).ok()
            })
    }

    fn arb_axis() -> impl Strategy<Value = Axis> {
        prop_oneof![Just(Axis::X), Just(Axis::Y), Just(Axis::Z)]
    }

    proptest! {
        #[test]
        fn rotations_preserve_norm(
            s in (1usize..=4).prop_flat_map(arb_state),
            axis in arb_axis(),
            angle in -7.0f64..7.0,
            q in 0usize..4,
        ) {
            let target = if q < s.num_qubits() { Target::Qubit(q) } else { Target::Global };
            let r = s.rotated(&Rotation { axis, angle, target }).unwrap();
            prop_assert!((r.norm_sqr() - 1.0).abs() < 1e-10);
            let p: f64 = r.probabilities().iter().sum();
            prop_assert!((p - 1.0).abs() < 1e-10);
        }

        #[test]
        fn rotations_compose(
            s in arb_state(3),
            axis in arb_axis(),
            a in -4.0f64..4.0,
            b in -4.0f64..4.0,
            global in any::<bool>(),
        ) {
            let target = if global { Target::Global } else { Target::Qubit(1) };
            let two = s
                .rotated(&Rotation { axis, angle: a, target }).unwrap()
                .rotated(&Rotation { axis, angle: b, target }).unwrap();
            let one = s.rotated(&Rotation { axis, angle: a + b, target }).unwrap();
            for (x, y) in two.amplitudes().iter().zip(one.amplitudes()) {
                prop_assert!((x - y).norm() < 1e-10);
            }
            let back = s
                .rotated(&Rotation { axis, angle: a, target }).unwrap()
                .rotated(&Rotation { axis, angle: -a, target }).unwrap();
            for (x, y) in back.amplitudes().iter().zip(s.amplitudes()) {
                prop_assert!((x - y).norm() < 1e-10);
            }
        }

        #[test]
        fn global_equals_sequential(s in arb_state(3), axis in arb_axis(), angle in -4.0f64..4.0) {
            let g = s.rotated(&Rotation::global(axis, angle)).unwrap();
            let mut seq = s.clone();
            for q in [2, 0, 1] {
                seq.apply_rotation(&Rotation::single(axis, angle, q)).unwrap();
            }
            for (x, y) in g.amplitudes().iter().zip(seq.amplitudes()) {
                prop_assert!((x - y).norm() < 1e-10);
            }
        }

        #[test]
        fn dense_unitary_preserves_norm(s in arb_state(2), angles in prop::collection::vec(-4.0f64..4.0, 6)) {
            // random 2-qubit unitary from a rotation/entangler product
            let mut u = DMatrix::<Complex64>::identity(4, 4);
            for (col, basis) in (0..4).enumerate() {
                let mut b = vec![c(0.0, 0.0); 4];
                b[basis] = c(1.0, 0.0);
                let mut v = StateVector::from_amplitudes(2, b).unwrap();
                v.apply_rotation(&Rotation::single(Axis::Y, angles[0], 0)).unwrap();
                v.apply_rotation(&Rotation::single(Axis::X, angles[1], 1)).unwrap();
                v.apply_z_phases(&[angles[2], angles[3]]).unwrap();
                let o = c(0.0, 0.0);
                let l = c(1.0, 0.0);
                v.apply_two_qubit(0, 1, &[[l, o, o, o], [o, l, o, o], [o, o, o, l], [o, o, l, o]]).unwrap();
                v.apply_rotation(&Rotation::global(Axis::Y, angles[4])).unwrap();
                v.apply_rotation(&Rotation::single(Axis::Z, angles[5], 0)).unwrap();
                for (row, a) in v.amplitudes().iter().enumerate() {
                    u[(row, col)] = *a;
                }
            }
            let mut out = s.clone();
            out.apply_dense_unitary_checked(&u).unwrap();
            prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-10);
        }
    }
}
