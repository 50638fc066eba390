//! INI-style experiment configuration.
//!
//! ```text
//! # comment
//! [model]
//! delta = 1.0
//! xi = 0.0
//!
//! [sweep]
//! xi = -1, 0, 1
//! ```
//!
//! Lists are comma separated. Every key is optional; unknown sections or keys
//! are rejected with the offending line number.

use std::collections::BTreeMap;
use std::path::PathBuf;

use qsync_core::lindblad::{Channel, ModelParams, Propagator};
use qsync_core::qinfo::EntropyUnit;
use qsync_core::DensityMatrix;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read config {path}: {message}")]
    Io { path: String, message: String },
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ConfigError::Line { line, message: message.into() }
    }
}

const KNOWN: &[(&str, &[&str])] = &[
    ("model", &["delta", "tau", "jxy", "gamma", "xi", "channel"]),
    ("evolve", &["initial_state", "t_final", "dt", "propagator"]),
    ("sync", &["window_fraction"]),
    ("sweep", &["xi", "gamma", "jxy"]),
    ("info", &["t_long"]),
    ("bench", &["n_states", "ranks"]),
    ("output", &["dir", "unit", "seed"]),
];

/// Raw `section.key → (value, line)` table.
#[derive(Debug, Default)]
struct Table {
    entries: BTreeMap<(String, String), (String, usize)>,
}

impl Table {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut table = Table::default();
        let mut section: Option<String> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split(['#', ';']).next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| ConfigError::at(line_no, "unterminated section header"))?
                    .trim()
                    .to_ascii_lowercase();
                if !KNOWN.iter().any(|(s, _)| *s == name) {
                    return Err(ConfigError::at(line_no, format!("unknown section [{name}]")));
                }
                section = Some(name);
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::at(line_no, format!("expected `key = value`, got {line:?}")))?;
            let key = key.trim().to_ascii_lowercase();
            let sec = section.clone().ok_or_else(|| ConfigError::at(line_no, "key outside of any [section]"))?;
            let allowed = KNOWN.iter().find(|(s, _)| *s == sec).map(|(_, k)| *k).unwrap_or(&[]);
            if !allowed.contains(&key.as_str()) {
                return Err(ConfigError::at(line_no, format!("unknown key `{key}` in [{sec}]")));
            }
            if table.entries.insert((sec.clone(), key.clone()), (value.trim().to_string(), line_no)).is_some() {
                return Err(ConfigError::at(line_no, format!("duplicate key `{key}` in [{sec}]")));
            }
        }
        Ok(table)
    }

    fn get(&self, section: &str, key: &str) -> Option<&(String, usize)> {
        self.entries.get(&(section.to_string(), key.to_string()))
    }

    fn parsed<T: std::str::FromStr>(&self, section: &str, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(section, key) {
            None => Ok(None),
            Some((v, line)) => {
                v.parse::<T>().map(Some).map_err(|e| ConfigError::at(*line, format!("[{section}] {key} = {v:?}: {e}")))
            }
        }
    }

    fn list(&self, section: &str, key: &str) -> Result<Option<(Vec<f64>, usize)>, ConfigError> {
        match self.get(section, key) {
            None => Ok(None),
            Some((v, line)) => {
                let items: Vec<&str> = v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
                if items.is_empty() {
                    return Err(ConfigError::at(*line, format!("[{section}] {key} is an empty list")));
                }
                let values = items
                    .iter()
                    .map(|s| {
                        s.parse::<f64>().map_err(|e| ConfigError::at(*line, format!("[{section}] {key}: {s:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Some((values, *line)))
            }
        }
    }

    fn line_of(&self, section: &str, key: &str) -> Option<usize> {
        self.get(section, key).map(|(_, l)| *l)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: ModelParams,
    pub initial_state: String,
    pub t_final: f64,
    pub dt: f64,
    pub propagator: Propagator,
    pub window_fraction: f64,
    /// Sweep axes; `None` means "use the command's default".
    pub xi: Option<Vec<f64>>,
    pub gamma: Option<Vec<f64>>,
    pub jxy: Option<Vec<f64>>,
    pub t_long: f64,
    pub n_states: usize,
    pub ranks: Vec<usize>,
    pub out_dir: PathBuf,
    pub unit: EntropyUnit,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            model: ModelParams::reference(0.0),
            initial_state: "10".into(),
            t_final: 200.0,
            dt: 0.01,
            propagator: Propagator::Expm,
            window_fraction: 0.25,
            xi: None,
            gamma: None,
            jxy: None,
            t_long: 500.0,
            n_states: 1000,
            ranks: vec![2],
            out_dir: PathBuf::from("out"),
            unit: EntropyUnit::Bits,
            seed: 0,
        }
    }
}

/// 16 log-spaced points in [0.01, 1].
pub fn default_gamma_grid() -> Vec<f64> {
    (0..16).map(|k| 10f64.powf(-2.0 + 2.0 * k as f64 / 15.0)).collect()
}

pub fn default_jxy_grid() -> Vec<f64> {
    vec![-1.0, 0.0, 1.0]
}

impl ExperimentConfig {
    pub fn from_file(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let t = Table::parse(text)?;
        let mut cfg = ExperimentConfig::default();

        let m = &mut cfg.model;
        m.delta = t.parsed("model", "delta")?.unwrap_or(m.delta);
        m.tau = t.parsed("model", "tau")?.unwrap_or(m.tau);
        m.j_xy = t.parsed("model", "jxy")?.unwrap_or(m.j_xy);
        m.gamma = t.parsed("model", "gamma")?.unwrap_or(m.gamma);
        m.xi = t.parsed("model", "xi")?.unwrap_or(m.xi);
        m.channel = t.parsed::<Channel>("model", "channel")?.unwrap_or(m.channel);
        if let Err(e) = m.validate() {
            let line = ["gamma", "xi", "delta", "tau", "jxy"].iter().find_map(|k| t.line_of("model", k)).unwrap_or(0);
            return Err(ConfigError::at(line, e.to_string()));
        }

        if let Some(label) = t.parsed::<String>("evolve", "initial_state")? {
            cfg.initial_state = label;
        }
        if let Err(e) = cfg.initial_state() {
            return Err(ConfigError::at(t.line_of("evolve", "initial_state").unwrap_or(0), e.to_string()));
        }
        cfg.t_final = t.parsed("evolve", "t_final")?.unwrap_or(cfg.t_final);
        cfg.dt = t.parsed("evolve", "dt")?.unwrap_or(cfg.dt);
        if cfg.dt.is_nan() || cfg.dt <= 0.0 || cfg.t_final.is_nan() || cfg.t_final < cfg.dt {
            let line = t.line_of("evolve", "dt").or(t.line_of("evolve", "t_final")).unwrap_or(0);
            return Err(ConfigError::at(
                line,
                format!("need dt > 0 and t_final >= dt (dt = {}, t_final = {})", cfg.dt, cfg.t_final),
            ));
        }
        if let Some((v, line)) = t.get("evolve", "propagator") {
            cfg.propagator = match v.to_ascii_lowercase().as_str() {
                "expm" => Propagator::Expm,
                "rk4" => Propagator::Rk4,
                other => return Err(ConfigError::at(*line, format!("unknown propagator {other:?}"))),
            };
        }

        cfg.window_fraction = t.parsed("sync", "window_fraction")?.unwrap_or(cfg.window_fraction);
        if !(cfg.window_fraction > 0.0 && cfg.window_fraction <= 1.0) {
            return Err(ConfigError::at(
                t.line_of("sync", "window_fraction").unwrap_or(0),
                "window_fraction must lie in (0, 1]",
            ));
        }

        if let Some((xs, line)) = t.list("sweep", "xi")? {
            if let Some(bad) = xs.iter().find(|x| x.is_nan() || x.abs() > 1.0) {
                return Err(ConfigError::at(line, format!("xi = {bad} outside [-1, 1]")));
            }
            cfg.xi = Some(xs);
        }
        if let Some((gs, line)) = t.list("sweep", "gamma")? {
            if let Some(bad) = gs.iter().find(|g| g.is_nan() || **g < 0.0) {
                return Err(ConfigError::at(line, format!("gamma = {bad} must be >= 0")));
            }
            cfg.gamma = Some(gs);
        }
        cfg.jxy = t.list("sweep", "jxy")?.map(|(v, _)| v);

        cfg.t_long = t.parsed("info", "t_long")?.unwrap_or(cfg.t_long);
        cfg.n_states = t.parsed("bench", "n_states")?.unwrap_or(cfg.n_states);
        if cfg.n_states == 0 {
            return Err(ConfigError::at(t.line_of("bench", "n_states").unwrap_or(0), "n_states must be >= 1"));
        }
        if let Some((rs, line)) = t.list("bench", "ranks")? {
            let ranks: Vec<usize> = rs.iter().map(|&r| r as usize).collect();
            if rs.iter().any(|&r| r.fract() != 0.0 || !(1.0..=4.0).contains(&r)) {
                return Err(ConfigError::at(line, "ranks must be integers in 1..=4"));
            }
            cfg.ranks = ranks;
        }

        if let Some(dir) = t.parsed::<String>("output", "dir")? {
            cfg.out_dir = PathBuf::from(dir);
        }
        cfg.unit = t.parsed::<EntropyUnit>("output", "unit")?.unwrap_or(cfg.unit);
        cfg.seed = t.parsed("output", "seed")?.unwrap_or(cfg.seed);
        Ok(cfg)
    }

    pub fn initial_state(&self) -> qsync_core::Result<DensityMatrix> {
        if self.initial_state.len() != 2 {
            return Err(qsync_core::Error::Input(format!(
                "initial_state {:?} must label two qubits, e.g. \"10\"",
                self.initial_state
            )));
        }
        DensityMatrix::basis_state(&self.initial_state)
    }

    pub fn xi_axis(&self) -> Vec<f64> {
        self.xi.clone().unwrap_or_else(|| vec![self.model.xi])
    }
}
