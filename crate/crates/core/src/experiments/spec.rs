//! Experiment spec files: versioned TOML with fail-closed parsing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadget::{Driver, GadgetConfig};

/// Supported spec schema version.
pub const SPEC_SCHEMA_VERSION: u32 = 1;

/// Which experiment a spec drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Ghz,
    PerturbedX,
    BitFlip,
    InfidelitySweep,
    MinorEmbedding,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Ghz => "ghz",
            ExperimentKind::PerturbedX => "perturbed-x",
            ExperimentKind::BitFlip => "bit-flip",
            ExperimentKind::InfidelitySweep => "infidelity-sweep",
            ExperimentKind::MinorEmbedding => "minor-embedding",
        }
    }
}

/// Physical evolution or the ideal effective propagator (GHZ experiment).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PropagatorMode {
    Physical,
    Ideal,
}

/// Gadget configuration section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigSpec {
    pub nd: usize,
    #[serde(default)]
    pub kinked: bool,
    pub gamma: f64,
    pub alpha: f64,
    pub driver: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

impl ConfigSpec {
    pub fn to_gadget_config(&self) -> Result<GadgetConfig> {
        let driver = match self.driver.as_str() {
            "none" => Driver::None,
            "single-x" => Driver::SingleX {
                beta: self
                    .beta
                    .ok_or_else(|| Error::Spec("config.beta: required for the single-x driver".into()))?,
            },
            "five-body" => Driver::FiveBody,
            "three-body" => Driver::ThreeBody,
            other => {
                return Err(Error::Spec(format!(
                    "config.driver: unknown driver '{other}' (expected none, single-x, five-body, three-body)"
                )))
            }
        };
        let config = GadgetConfig::new(self.nd, self.kinked, self.gamma, self.alpha, driver);
        config
            .validate()
            .map_err(|e| Error::Spec(format!("config: {e}")))?;
        Ok(config)
    }
}

/// Time grid section: `points` samples evenly spaced over `[0, t_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGridSpec {
    pub points: usize,
    pub t_max: f64,
}

/// Data-qubit drive section for the bit-flip experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSpec {
    pub qubit: usize,
    /// Scale the drive by the inverse logical overlap so the dressed term has
    /// unit strength.
    #[serde(default)]
    pub corrected: bool,
}

/// A parsed experiment spec. Unknown fields anywhere are hard errors so that
/// recorded manifests stay trustworthy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub schema: u32,
    pub kind: ExperimentKind,
    pub seed: u64,
    pub config: ConfigSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_grid: Option<TimeGridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repetitions: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_low: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_high: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drive: Option<DriveSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub propagator: Option<PropagatorMode>,
}

impl ExperimentSpec {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let spec: ExperimentSpec = toml::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text).map_err(|e| Error::Spec(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SPEC_SCHEMA_VERSION {
            return Err(Error::Spec(format!(
                "schema: unsupported version {} (expected {SPEC_SCHEMA_VERSION})",
                self.schema
            )));
        }
        self.config.to_gadget_config()?;
        if let Some(grid) = &self.time_grid {
            if grid.points < 2 {
                return Err(Error::Spec(
                    "time_grid.points: need at least 2 points".into(),
                ));
            }
            if !(grid.t_max.is_finite() && grid.t_max > 0.0) {
                return Err(Error::Spec("time_grid.t_max: must be positive".into()));
            }
        }
        for (name, grid) in [
            ("gamma_grid", &self.gamma_grid),
            ("eta_grid", &self.eta_grid),
        ] {
            if let Some(g) = grid {
                if g.is_empty() {
                    return Err(Error::Spec(format!("{name}: must be non-empty")));
                }
                if g.iter().any(|x| !x.is_finite() || *x < 0.0) {
                    return Err(Error::Spec(format!("{name}: entries must be non-negative")));
                }
            }
        }
        if let Some(reps) = self.repetitions {
            if reps == 0 {
                return Err(Error::Spec("repetitions: must be at least 1".into()));
            }
        }
        if let Some(drive) = &self.drive {
            if drive.qubit >= self.config.nd {
                return Err(Error::Spec(format!(
                    "drive.qubit: {} out of range for nd = {}",
                    drive.qubit, self.config.nd
                )));
            }
        }
        Ok(())
    }

    /// Time grid (default: 200 points over `[0, 4 pi]`).
    pub fn times(&self) -> Vec<f64> {
        let grid = self.time_grid.unwrap_or(TimeGridSpec {
            points: 200,
            t_max: 4.0 * std::f64::consts::PI,
        });
        super::time_grid(grid.points, grid.t_max)
    }

    /// Gamma sweep axis (default: just the config gamma).
    pub fn gammas(&self) -> Vec<f64> {
        self.gamma_grid
            .clone()
            .unwrap_or_else(|| vec![self.config.gamma])
    }

    /// Eta sweep axis (default: 8 log-spaced points in `[0.01, 1]`).
    pub fn etas(&self) -> Vec<f64> {
        self.eta_grid.clone().unwrap_or_else(|| {
            (0..8)
                .map(|j| 10f64.powf(-2.0 + 2.0 * j as f64 / 7.0))
                .collect()
        })
    }

    pub fn reps(&self) -> u32 {
        self.repetitions.unwrap_or(10)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GHZ_SPEC: &str = r#"
schema = 1
kind = "ghz"
seed = 42

[config]
nd = 5
gamma = 8.0
alpha = 1.0
driver = "five-body"

[time_grid]
points = 200
t_max = 12.566370614359172
"#;

    #[test]
    fn parses_a_minimal_spec() {
        let spec = ExperimentSpec::from_toml_str(GHZ_SPEC).unwrap();
        assert_eq!(spec.kind, ExperimentKind::Ghz);
        assert_eq!(spec.seed, 42);
        assert_eq!(spec.times().len(), 200);
        assert_eq!(spec.gammas(), vec![8.0]);
    }

    #[test]
    fn unknown_fields_fail_closed() {
        let text = GHZ_SPEC.replace("seed = 42", "seed = 42\nmystery = true");
        let err = ExperimentSpec::from_toml_str(&text).unwrap_err();
        assert!(err.to_string().contains("mystery"), "{err}");
    }

    #[test]
    fn wrong_schema_is_rejected() {
        let text = GHZ_SPEC.replace("schema = 1", "schema = 2");
        let err = ExperimentSpec::from_toml_str(&text).unwrap_err();
        assert!(err.to_string().contains("schema"), "{err}");
    }

    #[test]
    fn invalid_driver_names_offending_field() {
        let text = GHZ_SPEC.replace("five-body", "seven-body");
        let err = ExperimentSpec::from_toml_str(&text).unwrap_err();
        assert!(err.to_string().contains("config.driver"), "{err}");
    }

    #[test]
    fn default_eta_grid_is_log_spaced() {
        let spec = ExperimentSpec::from_toml_str(GHZ_SPEC).unwrap();
        let etas = spec.etas();
        assert_eq!(etas.len(), 8);
        assert!((etas[0] - 0.01).abs() < 1e-12);
        assert!((etas[7] - 1.0).abs() < 1e-12);
    }
}
