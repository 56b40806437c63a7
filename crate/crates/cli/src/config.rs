//! Run configuration: JSON file plus command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
        })
    }
}

/// Subcommand names as they appear on the command line and in config files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Orbit,
    Legendre,
    Killing,
    OmegaCheck,
    Curvature,
    RhoScan,
    Isometry,
}

impl CommandName {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Orbit => "orbit",
            Self::Legendre => "legendre",
            Self::Killing => "killing",
            Self::OmegaCheck => "omega-check",
            Self::Curvature => "curvature",
            Self::RhoScan => "rho-scan",
            Self::Isometry => "isometry",
        }
    }
}

/// `min:max:steps`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoRange {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl FromStr for RhoRange {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Validation(format!("rho range '{s}' must look like min:max:steps"));
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(bad());
        };
        Ok(Self {
            min: a.parse().map_err(|_| bad())?,
            max: b.parse().map_err(|_| bad())?,
            steps: n.parse().map_err(|_| bad())?,
        })
    }
}

/// Every field is optional so a file and flags can be layered; defaults
/// are applied by the accessors.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<CommandName>,
    pub n: Option<usize>,
    pub family: Option<String>,
    pub omega: Option<String>,
    pub k: Option<u32>,
    pub pair: Option<usize>,
    pub map: Option<String>,
    pub c_v: Option<f64>,
    pub rho: Option<String>,
    pub v_fixed: Option<f64>,
    pub u: Option<f64>,
    pub v: Option<f64>,
    pub h_fd: Option<f64>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub ic: Option<Vec<Vec<f64>>>,
    pub points: Option<usize>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($field:ident),*) => {
        $(if $top.$field.is_some() { $base.$field = $top.$field; })*
    };
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Fields set in `top` replace those in `self`.
    pub fn overlay(mut self, top: RunConfig) -> Self {
        overlay!(
            self, top, command, n, family, omega, k, pair, map, c_v, rho, v_fixed, u, v, h_fd, dt, t_end, ic, points,
            seed, output, format
        );
        self
    }

    pub fn command(&self) -> Result<CommandName, CliError> {
        self.command
            .ok_or_else(|| CliError::Validation("no subcommand given on the command line or in the config".into()))
    }

    /// Degrees of freedom; inferred from the first initial condition when
    /// unset and the conditions are in full Darboux order.
    pub fn n(&self) -> usize {
        if let Some(n) = self.n {
            return n;
        }
        match (&self.ic, self.pair) {
            (Some(ic), None) if !ic.is_empty() && ic[0].len() % 2 == 1 => ic[0].len() / 2,
            _ => 2,
        }
    }

    pub fn family(&self) -> &str {
        self.family.as_deref().unwrap_or(match self.command {
            Some(CommandName::Isometry) => "gtd_partial",
            _ => "epsilon",
        })
    }

    pub fn omega(&self) -> &str {
        self.omega.as_deref().unwrap_or("const:1")
    }

    pub fn c_v(&self) -> f64 {
        self.c_v.unwrap_or(1.5)
    }

    pub fn rho(&self) -> Result<RhoRange, CliError> {
        self.rho.as_deref().unwrap_or("0.2:4:200").parse()
    }

    pub fn v_fixed(&self) -> f64 {
        self.v_fixed.unwrap_or(1.0)
    }

    pub fn dt(&self) -> f64 {
        self.dt.unwrap_or(1e-3)
    }

    pub fn t_end(&self) -> f64 {
        self.t_end.unwrap_or(std::f64::consts::TAU)
    }

    pub fn points(&self) -> usize {
        self.points.unwrap_or(100)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn map(&self) -> &str {
        self.map.as_deref().unwrap_or("total")
    }

    /// Explicit format, else `.json` outputs are JSON, else CSV.
    pub fn format(&self) -> Format {
        self.format.unwrap_or_else(|| match &self.output {
            Some(p) if p.extension().is_some_and(|e| e == "json") => Format::Json,
            _ => Format::Csv,
        })
    }

    /// Checks the invariants that do not depend on the subcommand.
    pub fn validate(&self) -> Result<(), CliError> {
        let scalars = [
            ("c_v", self.c_v),
            ("v_fixed", self.v_fixed),
            ("u", self.u),
            ("v", self.v),
            ("h_fd", self.h_fd),
            ("dt", self.dt),
            ("t_end", self.t_end),
        ];
        for (name, value) in scalars {
            if let Some(x) = value {
                if !x.is_finite() {
                    return Err(CliError::Validation(format!("{name} must be finite, got {x}")));
                }
            }
        }
        for (name, value) in [("c_v", self.c_v), ("v_fixed", self.v_fixed), ("u", self.u), ("v", self.v)] {
            if value.is_some_and(|x| x <= 0.0) {
                return Err(CliError::Validation(format!("{name} must be positive")));
            }
        }
        if self.dt() <= 0.0 {
            return Err(CliError::Validation("dt must be positive".into()));
        }
        if self.h_fd.is_some_and(|h| h <= 0.0) {
            return Err(CliError::Validation("h_fd must be positive".into()));
        }
        if self.t_end() < 0.0 {
            return Err(CliError::Validation("t_end must be non-negative".into()));
        }
        if self.n() == 0 {
            return Err(CliError::Validation("n must be at least 1".into()));
        }
        if self.points() == 0 {
            return Err(CliError::Validation("points must be at least 1".into()));
        }
        if let Some(ic) = &self.ic {
            if ic.iter().flatten().any(|x| !x.is_finite()) {
                return Err(CliError::Validation("initial conditions must be finite".into()));
            }
        }
        let r = self.rho()?;
        if !(r.min.is_finite() && r.max.is_finite()) || r.min <= 0.0 || r.max < r.min || r.steps == 0 {
            return Err(CliError::Validation(format!(
                "rho range needs 0 < min <= max and steps >= 1, got {}:{}:{}",
                r.min, r.max, r.steps
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_json(r#"{"command": "orbit", "dtt": 0.1}"#).is_err());
        let c = RunConfig::from_json(r#"{"command": "rho-scan", "c_v": 1.5, "rho": "0.5:4:8"}"#).unwrap();
        assert_eq!(c.command, Some(CommandName::RhoScan));
        assert_eq!(c.rho().unwrap().steps, 8);
    }

    #[test]
    fn overlay_prefers_flags() {
        let file = RunConfig {
            dt: Some(0.1),
            seed: Some(3),
            ..Default::default()
        };
        let flags = RunConfig {
            dt: Some(0.01),
            ..Default::default()
        };
        let merged = file.overlay(flags);
        assert_eq!(merged.dt(), 0.01);
        assert_eq!(merged.seed(), 3);
    }

    #[test]
    fn validation() {
        let bad = [
            RunConfig { dt: Some(0.0), ..Default::default() },
            RunConfig { dt: Some(f64::NAN), ..Default::default() },
            RunConfig { rho: Some("4:1:10".into()), ..Default::default() },
            RunConfig { rho: Some("1:4".into()), ..Default::default() },
            RunConfig { c_v: Some(-1.0), ..Default::default() },
            RunConfig { points: Some(0), ..Default::default() },
        ];
        for c in bad {
            assert!(c.validate().is_err(), "{c:?}");
        }
        assert!(RunConfig::default().validate().is_ok());
    }

    #[test]
    fn n_is_inferred_from_initial_conditions() {
        let c = RunConfig {
            ic: Some(vec![vec![0.0; 7]]),
            ..Default::default()
        };
        assert_eq!(c.n(), 3);
    }
}
