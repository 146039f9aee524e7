//! Experiment configuration, read from TOML.
//!
//! Every numeric sweep parameter accepts a scalar, a list, or an evenly
//! spaced span `{ from, to, steps }` (both ends included). Tuples are the
//! cartesian product of all parameters, expanded in the field order of
//! [`SweepConfig`] with `e_total` varying fastest.

use std::path::PathBuf;

use isoenergy::{ARParams, CouplingProfile, GaussianPointerSpec, MPParams, ProfileShape};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Ar,
    Mp,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelKind::Ar => "ar",
            ModelKind::Mp => "mp",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sweep {
    One(f64),
    List(Vec<f64>),
    Span { from: f64, to: f64, steps: usize },
}

impl Sweep {
    pub fn values(&self, name: &str) -> Result<Vec<f64>, CliError> {
        let v = match self {
            Sweep::One(x) => vec![*x],
            Sweep::List(xs) => xs.clone(),
            Sweep::Span { from, to, steps } => match steps {
                0 => vec![],
                1 => vec![*from],
                &n => (0..n)
                    .map(|i| {
                        if i == n - 1 {
                            *to
                        } else {
                            from + i as f64 * (to - from) / (n - 1) as f64
                        }
                    })
                    .collect(),
            },
        };
        if v.is_empty() {
            return Err(CliError::Config(format!("`{name}` has no values")));
        }
        if let Some(bad) = v.iter().find(|x| !x.is_finite()) {
            return Err(CliError::Config(format!("`{name}` contains {bad}")));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn values(&self, name: &str) -> Result<Vec<T>, CliError> {
        let v = match self {
            OneOrMany::One(x) => vec![x.clone()],
            OneOrMany::Many(xs) => xs.clone(),
        };
        if v.is_empty() {
            return Err(CliError::Config(format!("`{name}` has no values")));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: OneOrMany<ModelKind>,
    pub sweep: SweepConfig,
    pub grid: GridConfig,
    pub tolerances: Tolerances,
    pub output: OutputConfig,
    pub verify: VerifyConfig,
    pub table1: Table1Config,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            model: OneOrMany::One(ModelKind::Ar),
            sweep: SweepConfig::default(),
            grid: GridConfig::default(),
            tolerances: Tolerances::default(),
            output: OutputConfig::default(),
            verify: VerifyConfig::default(),
            table1: Table1Config::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub shape: OneOrMany<ProfileShape>,
    /// Window length `L`.
    pub length: Sweep,
    /// Plateau value of `g`.
    pub coupling: Sweep,
    /// Absolute ramp width; must be zero for rectangular windows.
    pub ramp: Sweep,
    pub sigma: Sweep,
    /// Pointer centre; defaults to `0` for AR and `10 σ` for MP.
    pub center: Option<Sweep>,
    pub tilt: Sweep,
    pub chirp: Sweep,
    pub e_box: Sweep,
    pub e_total: Sweep,
    /// Start of the coupling window.
    pub x_i: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            shape: OneOrMany::One(ProfileShape::Rectangular),
            length: Sweep::One(1.0),
            coupling: Sweep::One(0.1),
            ramp: Sweep::One(0.0),
            sigma: Sweep::One(1.0),
            center: None,
            tilt: Sweep::One(0.0),
            chirp: Sweep::One(0.0),
            e_box: Sweep::One(0.5),
            e_total: Sweep::One(0.0),
            x_i: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArAmplitude {
    SecondOrder,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Lower bound on pointer grid size; grids grow to resolve the kick.
    pub min_points: usize,
    /// Clock grid sizes for `verify`, each doubling the previous.
    pub resolutions: Vec<usize>,
    pub ar_amplitude: ArAmplitude,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            min_points: 1024,
            resolutions: vec![256, 512, 1024, 2048],
            ar_amplitude: ArAmplitude::SecondOrder,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Bound on the finest eigen-residual of an exact solution.
    pub residual: f64,
    pub order_min: f64,
    pub order_max: f64,
    /// Approximate amplitudes must converge slower than this.
    pub approx_order_max: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual: 1e-6,
            order_min: 3.5,
            order_max: 4.5,
            approx_order_max: 1.0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// Pointer eigenvalues at which each eigen-residual is checked.
    pub q: Vec<f64>,
    /// Also check that the second-order AR amplitude fails to converge.
    pub approximate: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            q: vec![0.6],
            approximate: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Table1Config {
    pub cases: Vec<u32>,
    pub case2: Case2Config,
    pub case7: Case7Config,
}

impl Default for Table1Config {
    fn default() -> Self {
        Self {
            cases: vec![1, 2, 7],
            case2: Case2Config::default(),
            case7: Case7Config::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Case2Config {
    pub length: f64,
    pub coupling: f64,
    pub sigma: f64,
    pub e_total: Sweep,
}

impl Default for Case2Config {
    fn default() -> Self {
        Self {
            length: 1.0,
            coupling: 0.1,
            sigma: 1.0,
            e_total: Sweep::Span {
                from: 0.0,
                to: 500.0,
                steps: 51,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Case7Config {
    pub lengths: Vec<f64>,
    /// `L g Δq`, held fixed across the sweep.
    pub lg_dq: f64,
    pub sigma: f64,
    pub e_total: f64,
}

impl Default for Case7Config {
    fn default() -> Self {
        Self {
            lengths: vec![1.0, 0.1, 0.01, 0.001],
            lg_dq: 10.0,
            sigma: 1.0,
            e_total: 1.0,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Every parameter tuple, validated against its model.
    pub fn runs(&self) -> Result<Vec<RunInput>, CliError> {
        let s = &self.sweep;
        let models = self.model.values("model")?;
        let shapes = s.shape.values("shape")?;
        let lengths = s.length.values("length")?;
        let couplings = s.coupling.values("coupling")?;
        let ramps = s.ramp.values("ramp")?;
        let sigmas = s.sigma.values("sigma")?;
        let centers = s.center.as_ref().map(|c| c.values("center")).transpose()?;
        let tilts = s.tilt.values("tilt")?;
        let chirps = s.chirp.values("chirp")?;
        let e_boxes = s.e_box.values("e_box")?;
        let energies = s.e_total.values("e_total")?;
        if self.grid.min_points < 8 {
            return Err(CliError::Config("grid.min_points must be at least 8".into()));
        }

        let mut out = vec![];
        for &model in &models {
            for &shape in &shapes {
                for &length in &lengths {
                    for &coupling in &couplings {
                        for &ramp in &ramps {
                            for &sigma in &sigmas {
                                let default_center = match model {
                                    ModelKind::Ar => 0.0,
                                    ModelKind::Mp => 10.0 * sigma,
                                };
                                let cs = centers.clone().unwrap_or_else(|| vec![default_center]);
                                for &center in &cs {
                                    for &tilt in &tilts {
                                        for &chirp in &chirps {
                                            for &e_box in &e_boxes {
                                                for &e_total in &energies {
                                                    let run = RunInput {
                                                        model,
                                                        shape,
                                                        x_i: s.x_i,
                                                        length,
                                                        coupling,
                                                        ramp,
                                                        sigma,
                                                        center,
                                                        tilt,
                                                        chirp,
                                                        e_box,
                                                        e_total,
                                                    };
                                                    run.params()?;
                                                    out.push(run);
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// One point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunInput {
    pub model: ModelKind,
    pub shape: ProfileShape,
    pub x_i: f64,
    pub length: f64,
    pub coupling: f64,
    pub ramp: f64,
    pub sigma: f64,
    pub center: f64,
    pub tilt: f64,
    pub chirp: f64,
    pub e_box: f64,
    pub e_total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelParams {
    Ar(ARParams),
    Mp(MPParams),
}

impl RunInput {
    pub fn params(&self) -> Result<ModelParams, CliError> {
        let invalid = |e: isoenergy::Error| CliError::Config(format!("{self:?}: {e}"));
        let profile = CouplingProfile::new(
            self.x_i,
            self.x_i + self.length,
            self.coupling,
            self.ramp,
            self.shape,
        )
        .map_err(invalid)?;
        Ok(match self.model {
            ModelKind::Ar => {
                let pointer = GaussianPointerSpec::new(self.center, self.sigma)
                    .with_tilt(self.tilt)
                    .with_chirp(self.chirp);
                ModelParams::Ar(ARParams::new(self.e_total, self.e_box, profile, pointer).map_err(invalid)?)
            }
            ModelKind::Mp => {
                let pointer = MPParams::pointer_for(self.center, self.sigma)
                    .with_tilt(self.tilt)
                    .with_chirp(self.chirp);
                ModelParams::Mp(MPParams::new(self.e_total, self.e_box, profile, pointer).map_err(invalid)?)
            }
        })
    }
}
