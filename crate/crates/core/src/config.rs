//! TOML experiment configuration.
//!
//! Every field has a default matching the quantum-dot setup, so an empty
//! file (or no file) is a valid configuration.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cavity::{CavityError, CavityParams, ChiralParams};
use crate::lattice::{LatticeDims, LatticeError};
use crate::metrics::{ErrorModel, GateModel, MetricsError, SweepMode};
use crate::scheduler::Taus;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

impl ConfigError {
    fn invalid(field: &str, message: impl ToString) -> Self {
        Self::Invalid {
            field: field.to_string(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub mode: SweepMode,
    /// Lattice shape `[N₁, …, N_d]`.
    pub dims: Vec<usize>,
    /// Photons emitted; defaults to the full lattice.
    pub photons: Option<usize>,
    pub magnetic: MagneticConfig,
    pub chiral: ChiralConfig,
    pub error_model: ErrorModel,
    pub sweep: SweepConfig,
    pub schedule: ScheduleConfig,
    pub reflection: ReflectionConfig,
    /// Output CSV; `--out` takes precedence, stdout when neither is set.
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            mode: SweepMode::Magnetic,
            dims: vec![2, 2, 10],
            photons: None,
            magnetic: MagneticConfig::default(),
            chiral: ChiralConfig::default(),
            error_model: ErrorModel::quantum_dot(),
            sweep: SweepConfig::default(),
            schedule: ScheduleConfig::default(),
            reflection: ReflectionConfig::default(),
            output: None,
        }
    }
}

/// Rates as `value/2π` in GHz, field in tesla.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MagneticConfig {
    pub g_ghz: f64,
    pub kappa_ghz: f64,
    pub gamma_ghz: f64,
    pub b_field: f64,
    pub g_e: f64,
    pub g_h: f64,
}

impl Default for MagneticConfig {
    fn default() -> Self {
        Self {
            g_ghz: 10.0,
            kappa_ghz: 0.3,
            gamma_ghz: 40.0,
            b_field: 12.0,
            g_e: 0.43,
            g_h: 0.21,
        }
    }
}

impl MagneticConfig {
    pub fn params(&self) -> Result<CavityParams, CavityError> {
        CavityParams::from_ghz(
            self.g_ghz,
            self.kappa_ghz,
            self.gamma_ghz,
            self.b_field,
            self.g_e,
            self.g_h,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChiralConfig {
    pub cooperativity: f64,
    pub kappa_ghz: f64,
    pub gamma_ghz: f64,
}

impl Default for ChiralConfig {
    fn default() -> Self {
        Self {
            cooperativity: 100.0,
            kappa_ghz: 0.3,
            gamma_ghz: 40.0,
        }
    }
}

impl ChiralConfig {
    pub fn params(&self) -> Result<ChiralParams, CavityError> {
        let tau = std::f64::consts::TAU;
        ChiralParams::from_cooperativity(
            self.cooperativity,
            tau * self.kappa_ghz,
            tau * self.gamma_ghz,
        )
    }
}

/// One sweep axis: explicit values, or `points` samples from `start` to
/// `stop` (inclusive) on a linear or logarithmic scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(untagged)]
pub enum AxisSpec {
    Values {
        values: Vec<f64>,
    },
    Range {
        start: f64,
        stop: f64,
        points: usize,
        #[serde(default)]
        scale: AxisScale,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisScale {
    #[default]
    Linear,
    Log,
}

impl AxisSpec {
    pub fn values(&self) -> Result<Vec<f64>, String> {
        match self {
            AxisSpec::Values { values } if values.is_empty() => Err("no values".into()),
            AxisSpec::Values { values } => Ok(values.clone()),
            AxisSpec::Range { points: 0, .. } => Err("points must be > 0".into()),
            AxisSpec::Range {
                start,
                stop,
                points,
                scale,
            } => {
                let (a, b) = match scale {
                    AxisScale::Linear => (*start, *stop),
                    AxisScale::Log if *start > 0.0 && *stop > 0.0 => (start.log10(), stop.log10()),
                    AxisScale::Log => return Err("log axis needs positive bounds".into()),
                };
                Ok((0..*points)
                    .map(|i| {
                        let x = if *points == 1 {
                            a
                        } else {
                            a + (b - a) * i as f64 / (*points - 1) as f64
                        };
                        match scale {
                            AxisScale::Linear => x,
                            AxisScale::Log => 10f64.powf(x),
                        }
                    })
                    .collect())
            }
        }
    }
}

/// `axis1` is the cooperativity; `axis2` is the magnetic field (magnetic
/// mode) or the per-cycle spin error (chiral mode).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub axis1: AxisSpec,
    pub axis2: AxisSpec,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            axis1: AxisSpec::Range {
                start: 1.0,
                stop: 1e4,
                points: 17,
                scale: AxisScale::Log,
            },
            axis2: AxisSpec::Values {
                values: vec![3.0, 6.0, 9.0, 12.0],
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScheduleConfig {
    /// Cycles to simulate.
    pub horizon: usize,
    /// Propagation delays (ns); default `t_cycle/100`.
    pub tau1: Option<f64>,
    pub tau2: Option<f64>,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        Self {
            horizon: 40,
            tau1: None,
            tau2: None,
        }
    }
}

/// Probe detuning grid (GHz, relative to the cavity).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReflectionConfig {
    pub detuning_min_ghz: f64,
    pub detuning_max_ghz: f64,
    pub points: usize,
}

impl Default for ReflectionConfig {
    fn default() -> Self {
        Self {
            detuning_min_ghz: -150.0,
            detuning_max_ghz: 150.0,
            points: 601,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let de = toml::Deserializer::new(text);
        let config: Self =
            serde_path_to_error::deserialize(de).map_err(|e| ConfigError::Parse {
                path: e.path().to_string(),
                message: e.inner().message().to_string(),
            })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.into(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.lattice()?;
        self.error_model
            .validate()
            .map_err(|e| ConfigError::invalid("error_model", e))?;
        match self.mode {
            SweepMode::Magnetic => {
                self.magnetic
                    .params()
                    .map_err(|e| ConfigError::invalid("magnetic", e))?;
            }
            SweepMode::Chiral => {
                self.chiral
                    .params()
                    .map_err(|e| ConfigError::invalid("chiral", e))?;
            }
        }
        self.sweep
            .axis1
            .values()
            .map_err(|e| ConfigError::invalid("sweep.axis1", e))?;
        self.sweep
            .axis2
            .values()
            .map_err(|e| ConfigError::invalid("sweep.axis2", e))?;
        if self.reflection.points < 2
            || self.reflection.detuning_min_ghz >= self.reflection.detuning_max_ghz
        {
            return Err(ConfigError::invalid(
                "reflection",
                "needs points >= 2 and min < max",
            ));
        }
        Ok(())
    }

    pub fn lattice(&self) -> Result<LatticeDims, ConfigError> {
        let full: usize = self.dims.iter().product();
        LatticeDims::new(self.dims.clone(), self.photons.unwrap_or(full))
            .map_err(|e: LatticeError| ConfigError::invalid("dims", e))
    }

    pub fn gate_model(&self) -> Result<GateModel, ConfigError> {
        Ok(match self.mode {
            SweepMode::Magnetic => GateModel::Magnetic(
                self.magnetic
                    .params()
                    .map_err(|e| ConfigError::invalid("magnetic", e))?,
            ),
            SweepMode::Chiral => GateModel::Chiral(
                self.chiral
                    .params()
                    .map_err(|e| ConfigError::invalid("chiral", e))?,
            ),
        })
    }

    pub fn taus(&self) -> Taus {
        let default = Taus::default_for(self.error_model.t_cycle);
        Taus {
            tau1: self.schedule.tau1.unwrap_or(default.tau1),
            tau2: self.schedule.tau2.unwrap_or(default.tau2),
        }
    }

    /// Single-line JSON of the resolved configuration.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("configuration serializes")
    }
}

impl From<MetricsError> for ConfigError {
    fn from(e: MetricsError) -> Self {
        ConfigError::invalid("physics", e)
    }
}
