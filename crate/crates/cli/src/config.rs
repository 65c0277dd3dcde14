//! Run configuration: flat `key = value` files plus command-line overrides.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sparsiboost_core::{ColoringConfig, Seed, SparsifyConfig};

use crate::error::{io_err, CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: Seed,
    /// Hypothesis budget `T`.
    pub target: usize,
    /// Boosting rounds for the full model; `None` uses `c·T`.
    pub rounds: Option<usize>,
    /// Coloring constant `K_S`.
    pub ks: f64,
    /// Sparsification constant `K_H`.
    pub kh: f64,
    /// Boosting gap constant `C_V`.
    pub cv: f64,
    /// End-to-end gap constant `C_B`.
    pub cb: f64,
    pub coloring_retries: usize,
    pub round_retries: usize,
    /// Held-out share when no test file is given.
    pub test_fraction: f64,
    pub matrix_mode: bool,
    pub dataset: Option<PathBuf>,
    pub test: Option<PathBuf>,
    pub matrix: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let sparsify = SparsifyConfig::default();
        RunConfig {
            seed: Seed(0),
            target: 16,
            rounds: None,
            ks: sparsify.coloring.spencer_constant,
            kh: sparsify.halving_constant,
            cv: 4.0,
            cb: 30.0,
            coloring_retries: sparsify.coloring.retry_budget,
            round_retries: sparsify.round_retries,
            test_fraction: 0.25,
            matrix_mode: false,
            dataset: None,
            test: None,
            matrix: None,
            out: None,
        }
    }
}

fn parsed<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("invalid value {value:?} for {key}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(CliError::Config(format!(
            "invalid value {value:?} for {key}"
        ))),
    }
}

impl RunConfig {
    /// Sets one key. Relative paths resolve against `base`.
    pub fn set(&mut self, key: &str, value: &str, base: &Path) -> Result<()> {
        let path = || Some(base.join(value));
        match key {
            "seed" => self.seed = Seed(parsed(key, value)?),
            "target" | "T" => self.target = parsed(key, value)?,
            "rounds" => self.rounds = Some(parsed(key, value)?),
            "ks" => self.ks = parsed(key, value)?,
            "kh" => self.kh = parsed(key, value)?,
            "cv" => self.cv = parsed(key, value)?,
            "cb" => self.cb = parsed(key, value)?,
            "coloring_retries" => self.coloring_retries = parsed(key, value)?,
            "round_retries" => self.round_retries = parsed(key, value)?,
            "test_fraction" => self.test_fraction = parsed(key, value)?,
            "matrix_mode" => self.matrix_mode = parse_bool(key, value)?,
            "dataset" => self.dataset = path(),
            "test" => self.test = path(),
            "matrix" => self.matrix = path(),
            "out" => self.out = path(),
            _ => return Err(CliError::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_str(&mut self, text: &str, base: &Path) -> Result<()> {
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", k + 1)))?;
            self.set(key.trim(), value.trim(), base)
                .map_err(|e| CliError::Config(format!("line {}: {e}", k + 1)))?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        let mut cfg = RunConfig::default();
        cfg.apply_str(&text, path.parent().unwrap_or(Path::new("")))?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("ks", self.ks),
            ("kh", self.kh),
            ("cv", self.cv),
            ("cb", self.cb),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.target == 0 {
            return Err(CliError::Config("target must be at least 1".into()));
        }
        if self.rounds == Some(0) {
            return Err(CliError::Config("rounds must be at least 1".into()));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(CliError::Config(format!(
                "test_fraction must lie in (0, 1), got {}",
                self.test_fraction
            )));
        }
        let required = if self.matrix_mode {
            [("matrix", &self.matrix)]
        } else {
            [("dataset", &self.dataset)]
        };
        for (name, p) in required {
            if p.is_none() {
                return Err(CliError::Config(format!("{name} path is required")));
            }
        }
        for p in [&self.dataset, &self.test, &self.matrix]
            .into_iter()
            .flatten()
        {
            if !p.is_file() {
                return Err(CliError::Config(format!("{} does not exist", p.display())));
            }
        }
        Ok(())
    }

    pub fn sparsify_config(&self) -> SparsifyConfig {
        SparsifyConfig {
            coloring: ColoringConfig {
                spencer_constant: self.ks,
                retry_budget: self.coloring_retries,
                ..ColoringConfig::default()
            },
            halving_constant: self.kh,
            round_retries: self.round_retries,
        }
    }
}
