//! Run configuration, read from and written to TOML.
//!
//! ```toml
//! seed = 7
//! output_dir = "runs/uniform"
//!
//! [geometry]
//! n_min = 2
//! n_max = 5
//! radius = 1.0
//!
//! [couplings]
//! j_ising = 1.0
//! j_symmetric = 1.0
//!
//! [ansatz]
//! max_depth = 5
//!
//! [encoding]
//! kind = "uniform"
//! ```
//!
//! `couplings` has no defaults: `j_ising` and `j_symmetric` must be given.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use varsense_core::lattice::DEFAULT_ANGULAR_OFFSET;
use varsense_core::{
    Axis, BiasField, CmaConfig, CouplingConstants, CouplingLaw, DipolarHamiltonian, EncodingKind,
    EvolutionMethod, Lattice, LayerwiseConfig, MeasurementSetup, Rotation, SensingProblem,
    WeightVector,
};

use crate::error::HarnessError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    pub geometry: GeometryConfig,
    pub couplings: CouplingsConfig,
    #[serde(default)]
    pub ansatz: AnsatzSection,
    #[serde(default)]
    pub encoding: EncodingConfig,
    #[serde(default)]
    pub measurement: MeasurementConfig,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("runs/default")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub n_min: usize,
    pub n_max: usize,
    #[serde(default = "one")]
    pub radius: f64,
    #[serde(default = "default_offset")]
    pub angular_offset: f64,
    #[serde(default)]
    pub bias: BiasField,
    #[serde(default)]
    pub coupling_law: CouplingLaw,
}

fn one() -> f64 {
    1.0
}
fn default_offset() -> f64 {
    DEFAULT_ANGULAR_OFFSET
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingsConfig {
    pub j_ising: f64,
    pub j_symmetric: f64,
    #[serde(default = "one")]
    pub prefactor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnsatzSection {
    #[serde(default = "default_depth")]
    pub max_depth: usize,
    #[serde(default)]
    pub evolution: EvolutionMethod,
}

fn default_depth() -> usize {
    5
}

impl Default for AnsatzSection {
    fn default() -> Self {
        Self {
            max_depth: default_depth(),
            evolution: EvolutionMethod::Exact,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EncodingConfig {
    pub kind: EncodingKind,
    /// Only for `kind = "custom"`; length must equal the (single) qubit count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl Default for EncodingConfig {
    fn default() -> Self {
        Self {
            kind: EncodingKind::Uniform,
            weights: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementConfig {
    #[serde(default = "default_axis")]
    pub axis: Axis,
    #[serde(default = "default_angle")]
    pub angle: f64,
    #[serde(default = "default_theta0")]
    pub theta0: f64,
    #[serde(default = "default_delta")]
    pub shift_delta: f64,
    #[serde(default = "default_floor")]
    pub probability_floor: f64,
    /// Extra working points at which each optimized probe is re-scored.
    #[serde(default = "default_robustness")]
    pub robustness_theta0: Vec<f64>,
}

fn default_axis() -> Axis {
    Axis::Y
}
fn default_angle() -> f64 {
    -FRAC_PI_2
}
fn default_theta0() -> f64 {
    0.1
}
fn default_delta() -> f64 {
    FRAC_PI_2
}
fn default_floor() -> f64 {
    1e-12
}
fn default_robustness() -> Vec<f64> {
    vec![0.05, 0.1, 0.5]
}

impl Default for MeasurementConfig {
    fn default() -> Self {
        Self {
            axis: default_axis(),
            angle: default_angle(),
            theta0: default_theta0(),
            shift_delta: default_delta(),
            probability_floor: default_floor(),
            robustness_theta0: default_robustness(),
        }
    }
}

impl MeasurementConfig {
    pub fn setup_at(&self, theta0: f64) -> MeasurementSetup {
        MeasurementSetup {
            rotation: Rotation::global(self.axis, self.angle),
            shift_delta: self.shift_delta,
            theta0,
            probability_floor: self.probability_floor,
        }
    }

    pub fn setup(&self) -> MeasurementSetup {
        self.setup_at(self.theta0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub population_size: Option<usize>,
    #[serde(default = "default_sigma")]
    pub initial_sigma: f64,
    #[serde(default = "default_max_evaluations")]
    pub max_evaluations: usize,
    #[serde(default = "default_tolerance")]
    pub fitness_tolerance: f64,
    #[serde(default = "default_scale")]
    pub new_layer_scale: f64,
    #[serde(default)]
    pub freeze_core: bool,
    #[serde(default = "yes")]
    pub parallel: bool,
}

fn default_sigma() -> f64 {
    0.5
}
fn default_max_evaluations() -> usize {
    20_000
}
fn default_tolerance() -> f64 {
    1e-12
}
fn default_scale() -> f64 {
    PI
}
fn yes() -> bool {
    true
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            population_size: None,
            initial_sigma: default_sigma(),
            max_evaluations: default_max_evaluations(),
            fitness_tolerance: default_tolerance(),
            new_layer_scale: default_scale(),
            freeze_core: false,
            parallel: true,
        }
    }
}

impl RunConfig {
    /// A config with every optional section at its default.
    pub fn new(n_min: usize, n_max: usize, j_ising: f64, j_symmetric: f64) -> Self {
        Self {
            seed: 0,
            output_dir: default_output_dir(),
            geometry: GeometryConfig {
                n_min,
                n_max,
                radius: 1.0,
                angular_offset: DEFAULT_ANGULAR_OFFSET,
                bias: BiasField::Perpendicular,
                coupling_law: CouplingLaw::default(),
            },
            couplings: CouplingsConfig {
                j_ising,
                j_symmetric,
                prefactor: 1.0,
            },
            ansatz: AnsatzSection::default(),
            encoding: EncodingConfig::default(),
            measurement: MeasurementConfig::default(),
            optimizer: OptimizerConfig::default(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self, HarnessError> {
        let cfg: Self = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml_string(&self) -> Result<String, HarnessError> {
        toml::to_string_pretty(self).map_err(|e| HarnessError::Runtime(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<(), HarnessError> {
        std::fs::write(path, self.to_toml_string()?)
            .map_err(|e| HarnessError::Runtime(format!("cannot write {}: {e}", path.display())))
    }

    pub fn qubit_range(&self) -> std::ops::RangeInclusive<usize> {
        self.geometry.n_min..=self.geometry.n_max
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let g = &self.geometry;
        if g.n_min < 2 || g.n_min > g.n_max {
            return Err(HarnessError::Config(format!(
                "geometry: qubit range {}..={} is empty or below 2",
                g.n_min, g.n_max
            )));
        }
        if g.n_max > varsense_core::state::MAX_QUBITS {
            return Err(HarnessError::Config(format!(
                "geometry.n_max: {} exceeds the simulator limit of {}",
                g.n_max,
                varsense_core::state::MAX_QUBITS
            )));
        }
        if !(g.radius.is_finite() && g.radius > 0.0) {
            return Err(HarnessError::Config(
                "geometry.radius: must be positive".into(),
            ));
        }
        if let EvolutionMethod::Trotter { steps } = self.ansatz.evolution {
            if steps < 1 {
                return Err(HarnessError::Config(
                    "ansatz.evolution.steps: must be ≥ 1".into(),
                ));
            }
        }
        match (self.encoding.kind, &self.encoding.weights) {
            (EncodingKind::Custom, None) => {
                return Err(HarnessError::Config(
                    "encoding.weights: required for kind = \"custom\"".into(),
                ))
            }
            (EncodingKind::Custom, Some(w)) if g.n_min != g.n_max || w.len() != g.n_min => {
                return Err(HarnessError::Config(format!(
                    "encoding.weights: {} weights need a single qubit count n_min = n_max = {}",
                    w.len(),
                    w.len()
                )))
            }
            (EncodingKind::Custom, Some(_)) => {}
            (_, Some(_)) => {
                return Err(HarnessError::Config(
                    "encoding.weights: only allowed with kind = \"custom\"".into(),
                ))
            }
            (_, None) => {}
        }
        for n in self.qubit_range() {
            self.weights(n)
                .map_err(|e| HarnessError::Config(format!("encoding: {e}")))?;
        }
        self.measurement
            .setup()
            .validate()
            .map_err(|e| HarnessError::Config(format!("measurement: {e}")))?;
        let o = &self.optimizer;
        if o.population_size.is_some_and(|l| l < 4) {
            return Err(HarnessError::Config(
                "optimizer.population_size: must be ≥ 4".into(),
            ));
        }
        if !(o.initial_sigma.is_finite() && o.initial_sigma > 0.0) {
            return Err(HarnessError::Config(
                "optimizer.initial_sigma: must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn weights(&self, n: usize) -> varsense_core::Result<WeightVector> {
        match &self.encoding.weights {
            Some(w) if self.encoding.kind == EncodingKind::Custom => {
                WeightVector::custom(w.clone())
            }
            _ => WeightVector::of_kind(self.encoding.kind, n),
        }
    }

    pub fn lattice(&self, n: usize) -> varsense_core::Result<Lattice> {
        Lattice::polygon_with(
            n,
            self.geometry.radius,
            self.geometry.angular_offset,
            self.geometry.bias.clone(),
        )
    }

    pub fn coupling_constants(&self) -> CouplingConstants {
        CouplingConstants {
            j_ising: self.couplings.j_ising,
            j_symmetric: self.couplings.j_symmetric,
            prefactor: self.couplings.prefactor,
            law: self.geometry.coupling_law,
        }
    }

    pub fn hamiltonian(&self, n: usize) -> varsense_core::Result<DipolarHamiltonian> {
        DipolarHamiltonian::build(&self.lattice(n)?, &self.coupling_constants())
    }

    pub fn problem(&self, n: usize) -> varsense_core::Result<SensingProblem> {
        SensingProblem::new(
            self.hamiltonian(n)?,
            self.weights(n)?,
            self.measurement.setup(),
            self.ansatz.evolution,
        )
    }

    pub fn layerwise(&self) -> LayerwiseConfig {
        let o = &self.optimizer;
        LayerwiseConfig {
            cma: CmaConfig {
                population_size: o.population_size,
                initial_sigma: o.initial_sigma,
                max_evaluations: o.max_evaluations,
                fitness_tolerance: o.fitness_tolerance,
                seed: self.seed,
                parallel: o.parallel,
            },
            new_layer_scale: o.new_layer_scale,
            freeze_core: o.freeze_core,
        }
    }
}
