//! Run configuration: a flat TOML file whose unknown keys are rejected.
//!
//! ```toml
//! model = "frw1_tov"   # frw1 | frw2 | tov | frw1_tov | frw2_tov
//! r_min = 3.0
//! r_max = 7.0
//! r0 = 5.0
//! n = 2048
//! duration = 1.0
//! ```

use crate::models::{ModelSpec, ModelVariant, Setup};
use crate::relfluid::EosParams;
use crate::riemann::DEFAULT_EPS;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid configuration: {0}")]
    Validation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Frw1,
    Frw2,
    Tov,
    Frw1Tov,
    Frw2Tov,
}

impl ModelKind {
    pub fn is_matched(self) -> bool {
        matches!(self, ModelKind::Frw1Tov | ModelKind::Frw2Tov)
    }
}

impl std::str::FromStr for ModelKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "frw1" => ModelKind::Frw1,
            "frw2" => ModelKind::Frw2,
            "tov" => ModelKind::Tov,
            "frw1_tov" => ModelKind::Frw1Tov,
            "frw2_tov" => ModelKind::Frw2Tov,
            _ => return Err(ConfigError::Validation(format!("unknown model `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub model: ModelKind,
    pub r_min: f64,
    pub r_max: f64,
    /// Initial discontinuity of a matched model.
    pub r0: f64,
    pub n: usize,
    /// Coordinate time to run past the start time.
    pub duration: f64,
    /// Time-reversed FRW-1/TOV model (inflow).
    pub reversed: bool,
    /// Keep stepping after a boundary hit by chopping the right end.
    pub continue_chop: bool,
    pub sigma: f64,
    pub eps: f64,
    /// Snapshot every this many steps; 0 keeps only the first and last.
    pub snapshot_every: usize,
    pub output_dir: PathBuf,
    /// Start time of a pure model; matched models fix their own.
    pub t0: f64,
    /// FRW-2 integrating-factor constant; defaults to `√(2t̄₀)`.
    pub psi0: Option<f64>,
    /// TOV time scale of a pure TOV model.
    pub b0: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelKind::Frw1Tov,
            r_min: 3.0,
            r_max: 7.0,
            r0: 5.0,
            n: 1 << 14,
            duration: 1.0,
            reversed: false,
            continue_chop: false,
            sigma: 1.0 / 3.0,
            eps: DEFAULT_EPS,
            snapshot_every: 0,
            output_dir: PathBuf::from("out"),
            t0: 15.0,
            psi0: None,
            b0: 1.0,
        }
    }
}

pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<RunConfig, ConfigError> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| {
        let line = e
            .span()
            .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
            .unwrap_or(0);
        ConfigError::Parse {
            line,
            message: e.message().to_string(),
        }
    })?;
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Validation(m));
        if self.n < 8 {
            return bad(format!("n must be at least 8, got {}", self.n));
        }
        if !(self.r_min > 0.0 && self.r_min < self.r_max && self.r_max.is_finite()) {
            return bad(format!("need 0 < r_min < r_max, got [{}, {}]", self.r_min, self.r_max));
        }
        if self.model.is_matched() && !(self.r_min < self.r0 && self.r0 < self.r_max) {
            return bad(format!("r0 = {} must lie in ({}, {})", self.r0, self.r_min, self.r_max));
        }
        if !(self.sigma > 0.0 && self.sigma < 1.0) {
            return bad(format!("sigma must lie in (0, 1), got {}", self.sigma));
        }
        if !(self.eps > 0.0) {
            return bad(format!("eps must be positive, got {}", self.eps));
        }
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return bad(format!("duration must be positive, got {}", self.duration));
        }
        if self.reversed && self.model != ModelKind::Frw1Tov {
            return bad("reversed runs require model = \"frw1_tov\"".into());
        }
        self.setup().map(|_| ()).map_err(|e| ConfigError::Validation(e.to_string()))
    }

    pub fn eos(&self) -> EosParams {
        EosParams::new(self.sigma)
    }

    pub fn variant(&self) -> ModelVariant {
        match self.model {
            ModelKind::Frw1 => ModelVariant::Frw1,
            ModelKind::Frw2 => ModelVariant::Frw2 {
                psi0: self.psi0.unwrap_or_else(|| (2.0 * self.t0).sqrt()),
            },
            ModelKind::Tov => ModelVariant::Tov { b0: self.b0 },
            ModelKind::Frw1Tov => ModelVariant::MatchedFrw1Tov {
                r0: self.r0,
                reversed: self.reversed,
            },
            ModelKind::Frw2Tov => ModelVariant::MatchedFrw2Tov { r0: self.r0 },
        }
    }

    pub fn setup(&self) -> Result<Setup, crate::models::ModelError> {
        ModelSpec::new(self.variant(), self.eos()).setup(self.t0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_takes_defaults() {
        let c = parse_config_str("model = \"frw1\"\n").unwrap();
        assert_eq!(c.model, ModelKind::Frw1);
        assert_eq!(c.n, 16384);
        assert_eq!(c.sigma, 1.0 / 3.0);
        assert_eq!(c.eps, 1e-10);
        assert_eq!((c.r_min, c.r_max, c.t0), (3.0, 7.0, 15.0));
    }

    #[test]
    fn forward_run_defaults_are_the_standard_matched_parameters() {
        let c = parse_config_str("").unwrap();
        assert_eq!(c.model, ModelKind::Frw1Tov);
        assert_eq!((c.r_min, c.r_max, c.r0, c.n), (3.0, 7.0, 5.0, 16384));
        let setup = c.setup().unwrap();
        assert!((setup.t0 - 5.4554).abs() < 1e-4);
    }

    #[test]
    fn r0_outside_domain_is_rejected() {
        let e = parse_config_str("model = \"frw1_tov\"\nr0 = 8.0\n").unwrap_err();
        assert!(matches!(e, ConfigError::Validation(_)), "{e}");
    }

    #[test]
    fn unknown_key_reports_its_line() {
        let e = parse_config_str("model = \"tov\"\n\nsigmaa = 0.3\n").unwrap_err();
        match e {
            ConfigError::Parse { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("sigmaa"), "{message}");
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn small_grid_and_bad_eos_are_rejected() {
        assert!(parse_config_str("n = 4\n").is_err());
        assert!(parse_config_str("model = \"frw1\"\nsigma = 0.2\n").is_err());
        assert!(parse_config_str("model = \"tov\"\nreversed = true\n").is_err());
    }
}
