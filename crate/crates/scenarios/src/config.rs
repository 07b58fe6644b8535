//! JSON scenario configuration.
//!
//! Unknown keys are rejected everywhere. Optional numeric knobs have
//! documented defaults so a minimal file only names the scenario, system and
//! geometry.

use std::path::Path;

use curvtherm::frame::{Tensor2, Tensor3, Tensor4, Vec3};
use serde::{Deserialize, Serialize};

use crate::error::{ScenarioError, ScenarioResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Newtonian,
    Desitter,
    Custom,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Newtonian => "newtonian",
            ScenarioKind::Desitter => "desitter",
            ScenarioKind::Custom => "custom",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemConfig {
    /// Internal levels `diag(0, eps)` carried by a particle of mass `mass`.
    TwoLevel {
        eps: f64,
        #[serde(default = "default_mass")]
        mass: f64,
    },
    /// Truncated harmonic oscillator.
    Oscillator {
        mass: f64,
        omega0: f64,
        #[serde(default = "default_dim")]
        dim: usize,
    },
    /// Arbitrary real-symmetric internal Hamiltonian, given row by row.
    Matrix {
        h_int: Vec<Vec<f64>>,
        #[serde(default = "default_mass")]
        mass: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GeometryConfig {
    UniformGravity { g: f64 },
    DeSitter { hubble: f64 },
    Tables { samples: Vec<FrameRow> },
}

/// One tabulated frame sample. Tensor layouts follow [`curvtherm::FrameSample`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameRow {
    pub tau: f64,
    #[serde(default)]
    pub accel: Vec3,
    #[serde(default)]
    pub riemann_titj: Tensor2,
    #[serde(default)]
    pub riemann_tjik: Tensor3,
    #[serde(default)]
    pub riemann_ikjl: Tensor4,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub unitarity: f64,
    pub symmetry: f64,
    pub p_floor: f64,
    /// Largest population allowed on the two highest oscillator levels.
    pub leakage: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            unitarity: 1e-9,
            symmetry: 1e-12,
            p_floor: 1e-12,
            leakage: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurveConfig {
    /// Number of intervals in time curves.
    pub points: usize,
    pub zfactor_min: f64,
    pub zfactor_max: f64,
    pub zfactor_points: usize,
}

impl Default for CurveConfig {
    fn default() -> Self {
        Self {
            points: 50,
            zfactor_min: 0.5,
            zfactor_max: 1.5,
            zfactor_points: 21,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    #[serde(default = "default_beta")]
    pub beta: f64,
    pub system: SystemConfig,
    pub geometry: GeometryConfig,
    #[serde(default)]
    pub position: Vec3,
    #[serde(default)]
    pub momentum: Vec3,
    /// Proper duration `T` of the protocol.
    #[serde(default = "default_duration")]
    pub duration: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
    /// Absolute work-merging tolerance; derived from the spectrum when absent.
    #[serde(default)]
    pub merge_tol: Option<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output_path: Option<String>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub curves: CurveConfig,
}

fn default_mass() -> f64 {
    1.0
}
fn default_dim() -> usize {
    40
}
fn default_beta() -> f64 {
    1.0
}
fn default_duration() -> f64 {
    10.0
}
fn default_steps() -> usize {
    200
}

fn config_err(msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Config(msg.into())
}

fn positive(name: &str, v: f64) -> ScenarioResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(config_err(format!("{name} must be positive and finite, got {v}")))
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> ScenarioResult<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| config_err(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> ScenarioResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> ScenarioResult<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Field-level checks that do not depend on the scenario kind.
    pub fn validate(&self) -> ScenarioResult<()> {
        positive("beta", self.beta)?;
        positive("duration", self.duration)?;
        if self.steps < 1 {
            return Err(config_err("steps must be at least 1"));
        }
        if self.position.iter().chain(&self.momentum).any(|v| !v.is_finite()) {
            return Err(config_err("position and momentum must be finite"));
        }
        if let Some(tol) = self.merge_tol {
            if !(tol >= 0.0) || !tol.is_finite() {
                return Err(config_err(format!("merge_tol must be non-negative, got {tol}")));
            }
        }
        let t = &self.tolerances;
        positive("tolerances.unitarity", t.unitarity)?;
        positive("tolerances.symmetry", t.symmetry)?;
        positive("tolerances.p_floor", t.p_floor)?;
        positive("tolerances.leakage", t.leakage)?;
        if self.samples == Some(0) {
            return Err(config_err("samples must be at least 1"));
        }
        if self.samples.is_some() != self.seed.is_some() {
            return Err(config_err("sampling needs both seed and samples"));
        }
        let c = &self.curves;
        if c.points < 1 || c.zfactor_points < 2 {
            return Err(config_err("curves need at least 1 time interval and 2 zfactor points"));
        }
        positive("curves.zfactor_min", c.zfactor_min)?;
        if !(c.zfactor_max > c.zfactor_min) || !c.zfactor_max.is_finite() {
            return Err(config_err("curves.zfactor_max must exceed zfactor_min"));
        }

        match &self.system {
            SystemConfig::TwoLevel { eps, mass } => {
                positive("eps", *eps)?;
                positive("mass", *mass)?;
            }
            SystemConfig::Oscillator { mass, omega0, dim } => {
                positive("mass", *mass)?;
                positive("omega0", *omega0)?;
                if *dim < 2 {
                    return Err(config_err(format!("oscillator dim must be at least 2, got {dim}")));
                }
            }
            SystemConfig::Matrix { h_int, mass } => {
                positive("mass", *mass)?;
                let n = h_int.len();
                if n < 1 || h_int.iter().any(|row| row.len() != n) {
                    return Err(config_err("h_int must be a non-empty square matrix"));
                }
                if h_int.iter().flatten().any(|v| !v.is_finite()) {
                    return Err(config_err("h_int entries must be finite"));
                }
            }
        }
        match &self.geometry {
            GeometryConfig::UniformGravity { g } if !g.is_finite() => {
                Err(config_err(format!("g must be finite, got {g}")))
            }
            GeometryConfig::DeSitter { hubble } if !(*hubble >= 0.0) || !hubble.is_finite() => {
                Err(config_err(format!("hubble must be non-negative, got {hubble}")))
            }
            _ => Ok(()),
        }
    }
}
