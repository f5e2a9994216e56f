//! Outcome probabilities and the directional Classical Fisher Information.
//!
//! The encoded probe is rotated by a fixed global pre-measurement rotation
//! and read out in the computational basis. Per-qubit partials `∂p_k/∂φ_i`
//! come from the two-point parameter-shift rule, which is exact for the
//! half-angle `Z` generators, and are combined along `α` into
//! `dp_k/dq = (1/‖α‖²) Σ_i α_i ∂p_k/∂φ_i`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::encoding::WeightVector;
use crate::error::{Error, Result};
use crate::state::{Axis, Rotation, StateVector, Target};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSetup {
    /// Global rotation applied after encoding, before computational readout.
    pub rotation: Rotation,
    /// Parameter-shift offset `δ`, in `(0, π)`.
    pub shift_delta: f64,
    /// Working point `θ₀`.
    pub theta0: f64,
    /// Outcomes with `p_k ≤ floor` are left out of the Fisher sum.
    pub probability_floor: f64,
}

impl Default for MeasurementSetup {
    fn default() -> Self {
        Self {
            rotation: Rotation::global(Axis::Y, -FRAC_PI_2),
            shift_delta: FRAC_PI_2,
            theta0: 0.1,
            probability_floor: 1e-12,
        }
    }
}

impl MeasurementSetup {
    pub fn at(theta0: f64) -> Self {
        Self {
            theta0,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.shift_delta > 0.0 && self.shift_delta < PI) {
            return Err(Error::Domain(format!(
                "shift δ = {} must lie in (0, π)",
                self.shift_delta
            )));
        }
        if !(self.probability_floor.is_finite() && self.probability_floor > 0.0) {
            return Err(Error::Domain("probability floor must be positive".into()));
        }
        if self.rotation.target != Target::Global {
            return Err(Error::Domain(
                "pre-measurement rotation must be global".into(),
            ));
        }
        if !self.theta0.is_finite() || !self.rotation.angle.is_finite() {
            return Err(Error::Domain(
                "measurement setup values must be finite".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CfiReport {
    pub probabilities: Vec<f64>,
    /// `partials[i][k] = ∂p_k/∂φ_i`.
    pub partials: Vec<Vec<f64>>,
    pub directional_derivative: Vec<f64>,
    pub cfi_q: f64,
    pub cfi_theta: f64,
}

fn check_dims(probe: &StateVector, alpha: &WeightVector) -> Result<()> {
    if alpha.len() != probe.num_qubits() {
        return Err(Error::Shape(format!(
            "{} weights for a {}-qubit probe",
            alpha.len(),
            probe.num_qubits()
        )));
    }
    Ok(())
}

/// Readout probabilities after imprinting explicit per-qubit phases.
pub fn probabilities_at_phases(
    probe: &StateVector,
    phases: &[f64],
    rotation: &Rotation,
) -> Result<Vec<f64>> {
    let mut s = probe.clone();
    s.apply_z_phases(phases)?;
    s.apply_rotation(rotation)?;
    Ok(s.probabilities())
}

/// `p_k(θ)` for the encoded, rotated probe.
pub fn outcome_probabilities(
    probe: &StateVector,
    alpha: &WeightVector,
    theta: f64,
    setup: &MeasurementSetup,
) -> Result<Vec<f64>> {
    check_dims(probe, alpha)?;
    probabilities_at_phases(probe, &alpha.phases(theta), &setup.rotation)
}

/// `∂p_k/∂φ_i` at `φ = αθ` by shifting only qubit `i` by `±δ`.
pub fn phase_partials(
    probe: &StateVector,
    alpha: &WeightVector,
    theta: f64,
    setup: &MeasurementSetup,
) -> Result<Vec<Vec<f64>>> {
    check_dims(probe, alpha)?;
    setup.validate()?;
    let delta = setup.shift_delta;
    let denom = 2.0 * delta.sin();
    let base = alpha.phases(theta);
    (0..probe.num_qubits())
        .map(|i| {
            let mut plus = base.clone();
            plus[i] += delta;
            let mut minus = base.clone();
            minus[i] -= delta;
            let p_plus = probabilities_at_phases(probe, &plus, &setup.rotation)?;
            let p_minus = probabilities_at_phases(probe, &minus, &setup.rotation)?;
            Ok(p_plus
                .iter()
                .zip(&p_minus)
                .map(|(a, b)| (a - b) / denom)
                .collect())
        })
        .collect()
}

/// Full Fisher report at `θ`. `F(q)` sums `(dp_k/dq)²/p_k` over outcomes
/// above the probability floor; `F(θ) = F(q)·‖α‖⁴`.
pub fn directional_cfi(
    probe: &StateVector,
    alpha: &WeightVector,
    theta: f64,
    setup: &MeasurementSetup,
) -> Result<CfiReport> {
    let probabilities = outcome_probabilities(probe, alpha, theta, setup)?;
    let partials = phase_partials(probe, alpha, theta, setup)?;
    let inv_norm = alpha.norm_sq().recip();
    let directional_derivative: Vec<f64> = (0..probabilities.len())
        .map(|k| {
            inv_norm
                * alpha
                    .weights()
                    .iter()
                    .zip(&partials)
                    .map(|(a, row)| a * row[k])
                    .sum::<f64>()
        })
        .collect();
    let cfi_q = fisher_sum(
        &probabilities,
        &directional_derivative,
        setup.probability_floor,
    );
    Ok(CfiReport {
        cfi_theta: cfi_q * alpha.norm_sq().powi(2),
        probabilities,
        partials,
        directional_derivative,
        cfi_q,
    })
}

/// `Σ_{p_k > floor} (dp_k)²/p_k`.
pub fn fisher_sum(probabilities: &[f64], derivative: &[f64], floor: f64) -> f64 {
    probabilities
        .iter()
        .zip(derivative)
        .filter(|(p, _)| **p > floor)
        .map(|(p, d)| d * d / p)
        .sum()
}

/// `F(q)` at the setup's working point; the objective maximized by the optimizer.
pub fn cfi_q(probe: &StateVector, alpha: &WeightVector, setup: &MeasurementSetup) -> Result<f64> {
    Ok(directional_cfi(probe, alpha, setup.theta0, setup)?.cfi_q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{ee_bound, sql_bound};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use proptest::prelude::*;

    #[test]
    fn plus_state_reads_zero() {
        for n in 1..=4 {
            let p = outcome_probabilities(
                &StateVector::plus(n).unwrap(),
                &WeightVector::uniform(n).unwrap(),
                0.0,
                &MeasurementSetup::default(),
            )
            .unwrap();
            assert_abs_diff_eq!(p[0], 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn ghz_pair_probabilities() {
        // GHZ_2 with uniform α at θ=π: branches pick up relative phase Sθ = π,
        // giving (|00> - |11>)/√2 up to global phase; R_y(-π/2)⊗R_y(-π/2) maps
        // it to (|01> + |10>)/√2.
        let p = outcome_probabilities(
            &StateVector::ghz(2).unwrap(),
            &WeightVector::uniform(2).unwrap(),
            PI,
            &MeasurementSetup::default(),
        )
        .unwrap();
        let expected = [0.0, 0.5, 0.5, 0.0];
        for (a, b) in p.iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn single_qubit_partial_vanishes_at_extremum() {
        let probe = StateVector::plus(1).unwrap();
        let alpha = WeightVector::custom(vec![1.0]).unwrap();
        let setup = MeasurementSetup::default();
        let partials = phase_partials(&probe, &alpha, 0.0, &setup).unwrap();
        let h = 1e-6;
        let fd: Vec<f64> = {
            let a = outcome_probabilities(&probe, &alpha, h, &setup).unwrap();
            let b = outcome_probabilities(&probe, &alpha, -h, &setup).unwrap();
            a.iter().zip(&b).map(|(x, y)| (x - y) / (2.0 * h)).collect()
        };
        assert_abs_diff_eq!(partials[0][0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(partials[0][0], fd[0], epsilon = 1e-8);
        assert_abs_diff_eq!(partials[0][1], fd[1], epsilon = 1e-8);
    }

    #[test]
    fn product_probe_partials_stay_local() {
        let n = 3;
        let probe = StateVector::plus(n).unwrap();
        let alpha = WeightVector::weighted_central(n).unwrap();
        let partials = phase_partials(&probe, &alpha, 0.4, &MeasurementSetup::default()).unwrap();
        for (i, row) in partials.iter().enumerate() {
            assert_abs_diff_eq!(row.iter().sum::<f64>(), 0.0, epsilon = 1e-8);
            for other in (0..n).filter(|&q| q != i) {
                for bit in 0..2 {
                    let marginal: f64 = (0..row.len())
                        .filter(|k| (k >> (n - 1 - other)) & 1 == bit)
                        .map(|k| row[k])
                        .sum();
                    assert_abs_diff_eq!(marginal, 0.0, epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn product_probe_hits_sql() {
        for n in 2..=5 {
            let alpha = WeightVector::uniform(n).unwrap();
            let r = directional_cfi(
                &StateVector::plus(n).unwrap(),
                &alpha,
                0.1,
                &MeasurementSetup::default(),
            )
            .unwrap();
            assert_abs_diff_eq!(r.cfi_q, n as f64, epsilon = 1e-6 * n as f64);
            assert_abs_diff_eq!(r.cfi_q, sql_bound(&alpha), epsilon = 1e-6 * n as f64);
        }
    }

    #[test]
    fn ghz_hits_ee() {
        for n in 2..=5 {
            let alpha = WeightVector::uniform(n).unwrap();
            let r = directional_cfi(
                &StateVector::ghz(n).unwrap(),
                &alpha,
                0.1,
                &MeasurementSetup::default(),
            )
            .unwrap();
            assert_abs_diff_eq!(r.cfi_q, (n * n) as f64, epsilon = 1e-6 * (n * n) as f64);
        }
        let alpha = WeightVector::weighted_central(2).unwrap();
        let r = directional_cfi(
            &StateVector::ghz(2).unwrap(),
            &alpha,
            0.1,
            &MeasurementSetup::default(),
        )
        .unwrap();
        assert_abs_diff_eq!(r.cfi_q, 1.44, epsilon = 1e-9);
        assert_abs_diff_eq!(r.cfi_q, ee_bound(&alpha), epsilon = 1e-9);
    }

    #[test]
    fn setup_validation() {
        let probe = StateVector::plus(2).unwrap();
        let alpha = WeightVector::uniform(2).unwrap();
        for bad in [
            MeasurementSetup {
                shift_delta: 0.0,
                ..Default::default()
            },
            MeasurementSetup {
                shift_delta: PI,
                ..Default::default()
            },
            MeasurementSetup {
                probability_floor: 0.0,
                ..Default::default()
            },
            MeasurementSetup {
                rotation: Rotation::single(Axis::Y, 1.0, 0),
                ..Default::default()
            },
        ] {
            assert!(directional_cfi(&probe, &alpha, 0.1, &bad).is_err());
        }
        assert!(matches!(
            directional_cfi(
                &probe,
                &WeightVector::uniform(3).unwrap(),
                0.1,
                &Default::default()
            ),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn global_phase_invariance() {
        let probe = StateVector::normalized(
            2,
            vec![
                Complex64::new(0.3, 0.1),
                Complex64::new(-0.2, 0.5),
                Complex64::new(0.4, 0.0),
                Complex64::new(0.1, -0.6),
            ],
        )
        .unwrap();
        let shifted = StateVector::from_amplitudes(
            2,
            probe
                .amplitudes()
                .iter()
                .map(|a| a * Complex64::from_polar(1.0, 1.234))
                .collect(),
        )
        .unwrap();
        let alpha = WeightVector::weighted_central(2).unwrap();
        let setup = MeasurementSetup::default();
        let a = directional_cfi(&probe, &alpha, 0.3, &setup).unwrap().cfi_q;
        let b = directional_cfi(&shifted, &alpha, 0.3, &setup)
            .unwrap()
            .cfi_q;
        assert_abs_diff_eq!(a, b, epsilon = 1e-10 * a.max(1.0));
    }

    fn arb_state(n: usize) -> impl Strategy<Value = StateVector> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n).prop_filter_map(
            "nonzero",
            move |v| {
                StateVector::normalized(
                    n,
                    v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect(),
                )
                .ok()
            },
        )
    }

    proptest! {
        #[test]
        fn report_invariants(
            (probe, w) in (2usize..=4).prop_flat_map(|n| (arb_state(n), prop::collection::vec(-1.5f64..1.5, n))),
            theta in -2.0f64..2.0,
        ) {
            prop_assume!(w.iter().map(|x| x * x).sum::<f64>() > 1e-3);
            let alpha = WeightVector::custom(w).unwrap();
            let r = directional_cfi(&probe, &alpha, theta, &MeasurementSetup::default()).unwrap();
            prop_assert!((r.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-10);
            prop_assert!(r.directional_derivative.iter().sum::<f64>().abs() < 1e-8);
            prop_assert!(r.cfi_q >= 0.0);
            prop_assert!(r.cfi_q <= ee_bound(&alpha) + 1e-6);
            let expect_theta = r.cfi_q * alpha.norm_sq().powi(2);
            prop_assert!((r.cfi_theta - expect_theta).abs() <= 1e-8 * expect_theta.max(1e-300));
        }

        #[test]
        fn scale_invariance(
            probe in arb_state(3),
            w in prop::collection::vec(0.2f64..1.5, 3),
            theta in -2.0f64..2.0,
            scale in prop_oneof![-3.0f64..-0.3, 0.3f64..3.0],
        ) {
            let alpha = WeightVector::custom(w).unwrap();
            let setup = MeasurementSetup::default();
            let a = directional_cfi(&probe, &alpha, theta, &setup).unwrap();
            let b = directional_cfi(&probe, &alpha.scaled(scale).unwrap(), theta / scale, &setup).unwrap();
            // q = ‖α‖²θ rescales by c, so F(q) rescales by 1/c²
            let rescaled = b.cfi_q * scale * scale;
            prop_assert!((a.cfi_q - rescaled).abs() <= 1e-8 * a.cfi_q.max(1e-12));
        }
    }
}
