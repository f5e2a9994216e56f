//! Polygon-centred lattice geometry and pairwise dipolar coupling strengths.
//!
//! Site 0 is the central qubit. For `N ≥ 3` the remaining `N − 1` sites sit
//! on a circle of radius `R` around it; for `N = 2` the two sites are `R`
//! apart on the x axis. Lengths are dimensionless.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Direction of the external bias field, which fixes the angle `β_ij`
/// between each inter-qubit axis and the field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
#[derive(Default)]
pub enum BiasField {
    /// Field normal to the lattice plane: `β_ij = π/2` for every pair.
    #[default]
    Perpendicular,
    /// Field in the lattice plane at `angle` radians from the x axis. `β_ij`
    /// is the acute angle between the (undirected) pair axis and the field.
    InPlane { angle: f64 },
    /// Explicit symmetric `N×N` table of `β_ij` in radians.
    PerPair { angles: Vec<Vec<f64>> },
}

/// Angular factor used in the coupling strength.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingLaw {
    /// `1 − 3 cos β`.
    #[default]
    LinearCosine,
    /// `1 − 3 cos² β`, the usual dipole-dipole angular factor.
    SquaredCosine,
}

impl CouplingLaw {
    pub fn angular_factor(self, beta: f64) -> f64 {
        match self {
            CouplingLaw::LinearCosine => 1.0 - 3.0 * beta.cos(),
            CouplingLaw::SquaredCosine => 1.0 - 3.0 * beta.cos().powi(2),
        }
    }
}

/// Default angular position of the first peripheral site.
pub const DEFAULT_ANGULAR_OFFSET: f64 = FRAC_PI_2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    num_qubits: usize,
    radius: f64,
    positions: Vec<[f64; 2]>,
    bias: BiasField,
}

impl Lattice {
    /// Central site plus `N − 1` equally spaced peripherals (two sites on a
    /// line for `N = 2`), perpendicular bias, default angular offset.
    pub fn polygon(num_qubits: usize, radius: f64) -> Result<Self> {
        Self::polygon_with(
            num_qubits,
            radius,
            DEFAULT_ANGULAR_OFFSET,
            BiasField::Perpendicular,
        )
    }

    pub fn polygon_with(
        num_qubits: usize,
        radius: f64,
        angular_offset: f64,
        bias: BiasField,
    ) -> Result<Self> {
        if num_qubits < 2 {
            return Err(Error::Domain(format!(
                "lattice needs at least 2 sites, got {num_qubits}"
            )));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Domain(format!(
                "lattice radius must be positive, got {radius}"
            )));
        }
        let positions = if num_qubits == 2 {
            vec![[0.0, 0.0], [radius, 0.0]]
        } else {
            let ring = (num_qubits - 1) as f64;
            std::iter::once([0.0, 0.0])
                .chain((0..num_qubits - 1).map(|k| {
                    let a = angular_offset + 2.0 * PI * k as f64 / ring;
                    [radius * a.cos(), radius * a.sin()]
                }))
                .collect()
        };
        if let BiasField::PerPair { angles } = &bias {
            if angles.len() != num_qubits || angles.iter().any(|r| r.len() != num_qubits) {
                return Err(Error::Shape(format!(
                    "bias angle table must be {num_qubits}×{num_qubits}"
                )));
            }
        }
        Ok(Self {
            num_qubits,
            radius,
            positions,
            bias,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn center_index(&self) -> usize {
        0
    }

    pub fn positions(&self) -> &[[f64; 2]] {
        &self.positions
    }

    pub fn bias(&self) -> &BiasField {
        &self.bias
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (self.positions[i], self.positions[j]);
        (a[0] - b[0]).hypot(a[1] - b[1])
    }

    /// Angle `β_ij` between the pair axis and the bias field.
    pub fn bias_angle(&self, i: usize, j: usize) -> f64 {
        match &self.bias {
            BiasField::Perpendicular => FRAC_PI_2,
            BiasField::InPlane { angle } => {
                let (a, b) = (self.positions[i], self.positions[j]);
                let d = self.distance(i, j);
                let cos = ((b[0] - a[0]) * angle.cos() + (b[1] - a[1]) * angle.sin()) / d;
                cos.abs().min(1.0).acos()
            }
            BiasField::PerPair { angles } => angles[i][j],
        }
    }

    /// Symmetric coupling matrix `V_ij` with zero diagonal.
    pub fn coupling_matrix(&self, prefactor: f64, law: CouplingLaw) -> Result<DMatrix<f64>> {
        let n = self.num_qubits;
        let mut v = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let d = self.distance(i, j);
                let x = prefactor * law.angular_factor(self.bias_angle(i, j)) / distance_cubed(d)?;
                v[(i, j)] = x;
                v[(j, i)] = x;
            }
        }
        Ok(v)
    }
}

fn distance_cubed(distance: f64) -> Result<f64> {
    if !(distance.is_finite() && distance > 0.0) {
        return Err(Error::Domain(format!(
            "pair distance must be positive, got {distance}"
        )));
    }
    Ok(distance.powi(3))
}

/// `κ·(1 − 3 cos β)/d³`.
pub fn coupling_strength(distance: f64, beta: f64, prefactor: f64) -> Result<f64> {
    coupling_strength_with(distance, beta, prefactor, CouplingLaw::LinearCosine)
}

pub fn coupling_strength_with(
    distance: f64,
    beta: f64,
    prefactor: f64,
    law: CouplingLaw,
) -> Result<f64> {
    Ok(prefactor * law.angular_factor(beta) / distance_cubed(distance)?)
}
