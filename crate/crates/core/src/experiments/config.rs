//! Flat TOML run configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem::{potentials, sources};
use crate::inverse::minimizers;
use crate::observability::strategies;
use crate::wave::intensities;

/// Every key is optional in the file; missing keys take the defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Command this file is meant for; checked against the one invoked.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    /// Interior nodes for single-mesh commands.
    pub n: usize,
    /// Mesh list for sweeps and tables.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    pub t_final: f64,
    /// Observation times of the time sweep.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_list: Option<Vec<f64>>,
    /// Fixed time step; when absent the step is `dt_ratio * h`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    pub dt_ratio: f64,
    pub potential: String,
    pub source: String,
    pub intensity: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_displacement: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_velocity: Option<String>,
    /// Noise level of `invert`.
    pub delta: f64,
    /// Noise levels of the noise table.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deltas: Option<Vec<f64>>,
    pub seed: u64,
    pub fine_factor: usize,
    /// Noisy rows are averaged over this many seeds.
    pub repeats: usize,
    /// Adds the `h = 10⁻³` rows to the tables.
    pub include_finest: bool,
    pub strategy: String,
    pub first_term: bool,
    pub grad_tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    pub minimizer: String,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: None,
            n: 99,
            n_list: None,
            t_final: 3.0,
            t_list: None,
            dt: None,
            dt_ratio: 1.0,
            potential: "smooth-sine".into(),
            source: "g-smooth".into(),
            intensity: "constant".into(),
            initial_displacement: None,
            initial_velocity: None,
            delta: 0.0,
            deltas: None,
            seed: 0,
            fine_factor: 4,
            repeats: 5,
            include_finest: false,
            strategy: "gramian".into(),
            first_term: false,
            grad_tol: 1e-6,
            max_iter: None,
            minimizer: "cg".into(),
            out: PathBuf::from("out"),
        }
    }
}

/// `(key, meaning)` for every configuration key, in file order.
pub const KEYS: &[(&str, &str)] = &[
    ("command", "command the file is meant for (optional)"),
    ("n", "interior nodes N, h = 1/(N+1) [99]"),
    ("n_list", "mesh list for sweeps and tables"),
    ("t_final", "observation time T [3]"),
    (
        "t_list",
        "observation times of time-sweep [2, 2.25, 2.5, 3]",
    ),
    ("dt", "fixed time step (default dt_ratio * h)"),
    ("dt_ratio", "time step as a multiple of h [1]"),
    (
        "potential",
        "smooth-sine | discontinuous-step | zero | constant:<c> | table:<csv>",
    ),
    (
        "source",
        "f-discontinuous | g-smooth | zero | constant:<c> | sine:<k> | table:<csv>",
    ),
    ("intensity", "constant[:c] | cos:<w> | decay:<r> [constant]"),
    (
        "initial_displacement",
        "source-style selector for w0 (needs a derivative)",
    ),
    ("initial_velocity", "source-style selector for w1"),
    ("delta", "relative noise level of invert [0]"),
    ("deltas", "noise levels of table2 [0.05, 0.1, 0.25]"),
    ("seed", "base seed of all random streams [0]"),
    (
        "fine_factor",
        "synthesis mesh has h/fine_factor, at least 4 [4]",
    ),
    ("repeats", "seeds averaged per noisy row [5]"),
    ("include_finest", "add h = 1e-3 rows to the tables [false]"),
    (
        "strategy",
        "gramian | eigenmodes[:pairs] | random[:trials] | rayleigh[:iters]",
    ),
    (
        "first_term",
        "report the first-term-only top-mode quotient [false]",
    ),
    (
        "grad_tol",
        "stop when the gradient norm is below this [1e-6]",
    ),
    ("max_iter", "iteration cap (default 10 N)"),
    ("minimizer", "cg | pcg-mass | steepest-descent [cg]"),
    ("out", "output directory [out]"),
];

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    /// Time step used on a mesh of size `h`.
    pub fn time_step(&self, h: f64) -> f64 {
        self.dt.unwrap_or(self.dt_ratio * h)
    }

    /// Resolves every selector and checks ranges.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("n must be positive"));
        }
        if !(self.t_final > 0.0) {
            return Err(Error::invalid(format!(
                "t_final must be positive, got {}",
                self.t_final
            )));
        }
        if let Some(ts) = &self.t_list {
            if ts.is_empty() || ts.iter().any(|t| !(*t > 0.0)) {
                return Err(Error::invalid("t_list must hold positive times"));
            }
        }
        if let Some(ns) = &self.n_list {
            if ns.is_empty() || ns.contains(&0) {
                return Err(Error::invalid("n_list must hold positive sizes"));
            }
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) {
                return Err(Error::invalid(format!("dt must be positive, got {dt}")));
            }
        }
        if !(self.dt_ratio > 0.0) {
            return Err(Error::invalid("dt_ratio must be positive"));
        }
        let deltas = self
            .deltas
            .iter()
            .flatten()
            .chain(std::iter::once(&self.delta));
        for d in deltas {
            if !(*d >= 0.0) {
                return Err(Error::invalid(format!(
                    "noise levels must be nonnegative, got {d}"
                )));
            }
        }
        if self.fine_factor < 4 {
            return Err(Error::invalid("fine_factor must be at least 4"));
        }
        if self.repeats == 0 {
            return Err(Error::invalid("repeats must be positive"));
        }
        if !(self.grad_tol > 0.0) {
            return Err(Error::invalid("grad_tol must be positive"));
        }
        potentials().build(&self.potential)?;
        sources().build(&self.source)?;
        intensities().build(&self.intensity)?;
        for sel in self
            .initial_displacement
            .iter()
            .chain(&self.initial_velocity)
        {
            sources().build(sel)?;
        }
        strategies().build(&self.strategy)?;
        minimizers().build(&self.minimizer)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = RunConfig::default();
        let text = c.to_toml().unwrap();
        assert_eq!(RunConfig::from_toml(&text).unwrap(), c);
        c.validate().unwrap();
    }

    #[test]
    fn full_round_trip() {
        let text = r#"
command = "table2"
n = 19
n_list = [9, 19]
t_final = 2.5
t_list = [2.0, 3.0]
dt = 0.01
potential = "constant:2"
source = "sine:3"
intensity = "cos:1"
initial_displacement = "sine:1"
initial_velocity = "zero"
deltas = [0.05, 0.1]
seed = 42
include_finest = true
out = "results"
"#;
        let c = RunConfig::from_toml(text).unwrap();
        assert_eq!(c.n_list, Some(vec![9, 19]));
        let again = RunConfig::from_toml(&c.to_toml().unwrap()).unwrap();
        assert_eq!(again, c);
        c.validate().unwrap();
    }

    #[test]
    fn every_field_documented() {
        let text = RunConfig {
            command: Some("x".into()),
            n_list: Some(vec![1]),
            t_list: Some(vec![1.0]),
            dt: Some(0.1),
            initial_displacement: Some("zero".into()),
            initial_velocity: Some("zero".into()),
            deltas: Some(vec![0.1]),
            max_iter: Some(3),
            ..RunConfig::default()
        }
        .to_toml()
        .unwrap();
        let table: toml::Table = text.parse().unwrap();
        for key in table.keys() {
            assert!(KEYS.iter().any(|(k, _)| k == key), "{key} undocumented");
        }
        assert_eq!(table.len(), KEYS.len());
    }

    #[test]
    fn rejects_bad_values() {
        assert!(RunConfig::from_toml("bogus = 1").is_err());
        let bad = [
            RunConfig {
                t_final: 0.0,
                ..RunConfig::default()
            },
            RunConfig {
                delta: -0.1,
                ..RunConfig::default()
            },
            RunConfig {
                potential: "nope".into(),
                ..RunConfig::default()
            },
            RunConfig {
                fine_factor: 2,
                ..RunConfig::default()
            },
        ];
        for c in bad {
            assert!(c.validate().is_err());
        }
    }
}
