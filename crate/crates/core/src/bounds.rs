//! Closed-form precision bounds on `F(q)` for a fixed interrogation time
//! `t = 1`: separable probes reach `1/‖α‖²`, optimally entangled probes
//! reach `S²/‖α‖⁴` with `S = Σ|α_i|`.

use serde::{Deserialize, Serialize};

use crate::encoding::{EncodingKind, WeightVector};
use crate::error::{Error, Result};

/// Standard quantum limit `F_SQL(q) = 1/‖α‖²`.
pub fn sql_bound(alpha: &WeightVector) -> f64 {
    alpha.norm_sq().recip()
}

/// Entanglement-enhanced bound `F_EE(q) = S²/‖α‖⁴`.
pub fn ee_bound(alpha: &WeightVector) -> f64 {
    (alpha.abs_sum() / alpha.norm_sq()).powi(2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub num_qubits: usize,
    pub encoding: EncodingKind,
    pub sql: f64,
    pub ee: f64,
}

impl BoundsRow {
    pub fn for_weights(alpha: &WeightVector) -> Self {
        Self {
            num_qubits: alpha.len(),
            encoding: alpha.kind(),
            sql: sql_bound(alpha),
            ee: ee_bound(alpha),
        }
    }
}

/// Rows for the given encodings over `n_min..=n_max`, grouped by encoding.
pub fn bounds_table_for(
    n_min: usize,
    n_max: usize,
    encodings: &[EncodingKind],
) -> Result<Vec<BoundsRow>> {
    if n_min < 2 || n_min > n_max {
        return Err(Error::Domain(format!(
            "invalid qubit range {n_min}..={n_max} (need 2 ≤ n_min ≤ n_max)"
        )));
    }
    let mut rows = Vec::with_capacity(encodings.len() * (n_max - n_min + 1));
    for &kind in encodings {
        for n in n_min..=n_max {
            rows.push(BoundsRow::for_weights(&WeightVector::of_kind(kind, n)?));
        }
    }
    Ok(rows)
}

/// Uniform and weighted-central rows over `n_min..=n_max`.
pub fn bounds_table(n_min: usize, n_max: usize) -> Result<Vec<BoundsRow>> {
    bounds_table_for(
        n_min,
        n_max,
        &[EncodingKind::Uniform, EncodingKind::WeightedCentral],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn sql_examples() {
        assert_abs_diff_eq!(
            sql_bound(&WeightVector::uniform(3).unwrap()),
            3.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            sql_bound(&WeightVector::weighted_central(4).unwrap()),
            0.571,
            epsilon = 5e-4
        );
        assert_eq!(sql_bound(&WeightVector::custom(vec![1.0]).unwrap()), 1.0);
    }

    #[test]
    fn ee_examples() {
        assert_abs_diff_eq!(
            ee_bound(&WeightVector::uniform(5).unwrap()),
            25.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            ee_bound(&WeightVector::weighted_central(3).unwrap()),
            1.778,
            epsilon = 5e-4
        );
        assert_eq!(ee_bound(&WeightVector::custom(vec![1.0]).unwrap()), 1.0);
    }

    #[test]
    fn table_shape_and_values() {
        let rows = bounds_table(2, 5).unwrap();
        assert_eq!(rows.len(), 8);
        let uniform: Vec<_> = rows
            .iter()
            .filter(|r| r.encoding == EncodingKind::Uniform)
            .collect();
        for (r, n) in uniform.iter().zip(2..=5) {
            assert_abs_diff_eq!(r.sql, n as f64, epsilon = 1e-12);
            assert_abs_diff_eq!(r.ee, (n * n) as f64, epsilon = 1e-12);
        }
        let weighted: Vec<_> = rows
            .iter()
            .filter(|r| r.encoding == EncodingKind::WeightedCentral)
            .collect();
        for (r, sql) in weighted.iter().zip([0.800, 0.667, 0.571, 0.500]) {
            assert_abs_diff_eq!(r.sql, sql, epsilon = 5e-4);
        }
        assert_eq!(bounds_table(2, 2).unwrap().len(), 2);
        assert!(bounds_table(5, 2).is_err());
        assert!(bounds_table(1, 3).is_err());
    }

    #[test]
    fn heisenberg_gain_for_uniform() {
        for n in 2..=8 {
            let a = WeightVector::uniform(n).unwrap();
            assert_abs_diff_eq!(ee_bound(&a) / sql_bound(&a), n as f64, epsilon = 1e-12);
        }
    }

    proptest! {
        #[test]
        fn bound_symmetries(
            w in prop::collection::vec(-2.0f64..2.0, 1..7),
            scale in prop_oneof![-5.0f64..-0.1, 0.1f64..5.0],
            rot in 0usize..7,
        ) {
            prop_assume!(w.iter().any(|x| x.abs() > 1e-3));
            let a = WeightVector::custom(w.clone()).unwrap();
            let (sql, ee) = (sql_bound(&a), ee_bound(&a));
            prop_assert!(ee >= sql * (1.0 - 1e-12));
            let ratio = ee / sql;
            let expect = a.abs_sum().powi(2) / a.norm_sq();
            prop_assert!((ratio - expect).abs() <= 1e-10 * expect);

            let neg = a.scaled(-1.0).unwrap();
            prop_assert!((sql_bound(&neg) - sql).abs() <= 1e-12 * sql);
            prop_assert!((ee_bound(&neg) - ee).abs() <= 1e-12 * ee);

            let mut p = w.clone();
            p.rotate_left(rot % w.len());
            let perm = WeightVector::custom(p).unwrap();
            prop_assert!((sql_bound(&perm) - sql).abs() <= 1e-12 * sql);
            prop_assert!((ee_bound(&perm) - ee).abs() <= 1e-12 * ee);

            let s = a.scaled(scale).unwrap();
            prop_assert!((sql_bound(&s) - sql / (scale * scale)).abs() <= 1e-10 * sql_bound(&s));
            prop_assert!((ee_bound(&s) - ee / (scale * scale)).abs() <= 1e-10 * ee_bound(&s));
        }

        #[test]
        fn equality_iff_single_nonzero(i in 0usize..5, v in 0.1f64..3.0) {
            let mut w = vec![0.0; 5];
            w[i] = v;
            let a = WeightVector::custom(w).unwrap();
            prop_assert!((ee_bound(&a) - sql_bound(&a)).abs() < 1e-12 * sql_bound(&a));
        }
    }
}
