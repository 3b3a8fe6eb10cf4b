//! Run configuration: built-in defaults, an optional TOML file, then
//! command-line flags, in increasing order of precedence.
//!
//! ```toml
//! [geometry]
//! ell = 6e-6          # slit spacing, m
//! eps = 2e-6          # slit width, m
//! lambda = 1.8e-8     # de Broglie wavelength, m
//! distance = 0.037    # slit-to-screen distance, m
//!
//! [bath]
//! temperature = 2.5e-3
//! mass = 3.349e-26
//! t_over_tau = [0.0, 0.5]   # or: gamma = 1e-3 (never both)
//! t = 0.0336                # flight time, s; defaults to L m λ / h
//!
//! [paths]
//! n = 4               # or a list for the figure commands
//! beta = 1.0
//! pi_path = 4         # 1-based; 0 disables the π phase
//! amplitudes = [0.5, 0.5, 0.5, 0.5]
//!
//! [sweep]
//! samples = 4096
//! points = 101
//! t_max = 3.0
//! x_periods = 3.0
//! model = "selective"  # screen: selective | fraunhofer | exact
//!
//! [output]
//! format = "csv"       # or "json"
//! dir = "out"
//! emit_plot_script = false
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn into_vec(self) -> Vec<T> {
        match self {
            Self::One(v) => vec![v],
            Self::Many(v) => v,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub geometry: GeometrySection,
    pub bath: BathSection,
    pub paths: PathsSection,
    pub sweep: SweepSection,
    pub output: OutputSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometrySection {
    pub ell: Option<f64>,
    pub eps: Option<f64>,
    pub lambda: Option<f64>,
    pub distance: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BathSection {
    pub temperature: Option<f64>,
    pub mass: Option<f64>,
    pub gamma: Option<f64>,
    pub t: Option<f64>,
    pub t_over_tau: Option<OneOrMany<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathsSection {
    pub n: Option<OneOrMany<usize>>,
    pub beta: Option<f64>,
    pub pi_path: Option<usize>,
    pub amplitudes: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub samples: Option<usize>,
    pub points: Option<usize>,
    pub t_max: Option<f64>,
    pub x_periods: Option<f64>,
    pub model: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub format: Option<String>,
    pub dir: Option<PathBuf>,
    pub emit_plot_script: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| HarnessError::validation("config", e.message().to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(HarnessError::validation("output.format", format!("expected csv or json, got {other:?}"))),
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScreenModel {
    /// Maximally coherent (or given-amplitude) input, environment on the last path.
    Selective,
    /// Far-field pattern, every pair damped.
    Fraunhofer,
    /// Per-slit envelopes and phases, every pair damped.
    Exact,
}

impl ScreenModel {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "selective" => Ok(Self::Selective),
            "fraunhofer" => Ok(Self::Fraunhofer),
            "exact" => Ok(Self::Exact),
            other => Err(HarnessError::validation(
                "sweep.model",
                format!("expected selective, fraunhofer or exact, got {other:?}"),
            )),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Selective => "selective",
            Self::Fraunhofer => "fraunhofer",
            Self::Exact => "exact",
        }
    }
}

/// Ultracold Neon multi-slit experiment.
pub mod neon {
    pub const MASS: f64 = 3.349e-26;
    pub const TEMPERATURE: f64 = 2.5e-3;
    pub const LAMBDA: f64 = 0.018e-6;
    pub const ELL: f64 = 6e-6;
    pub const DISTANCE: f64 = 37e-3;
    pub const EPS: f64 = 2e-6;
}

/// Command-line values; `None` leaves the file or default value in place.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub n: Option<Vec<usize>>,
    pub beta: Option<f64>,
    pub pi_path: Option<usize>,
    pub samples: Option<usize>,
    pub points: Option<usize>,
    pub t_over_tau: Option<Vec<f64>>,
    pub gamma: Option<f64>,
    pub model: Option<String>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub emit_plot_script: bool,
}

/// Everything a run needs, merged and validated field by field.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub n: Option<Vec<usize>>,
    pub beta: Option<f64>,
    /// Zero-based, `Some(None)` when the π phase was explicitly disabled.
    pub pi_path: Option<Option<usize>>,
    pub amplitudes: Option<Vec<f64>>,
    pub ell: f64,
    pub eps: f64,
    pub lambda: f64,
    pub distance: f64,
    pub temperature: f64,
    pub mass: f64,
    pub gamma: Option<f64>,
    pub flight_time: Option<f64>,
    pub t_over_tau: Option<Vec<f64>>,
    pub samples: Option<usize>,
    pub points: Option<usize>,
    pub t_max: Option<f64>,
    pub x_periods: f64,
    pub model: ScreenModel,
    pub format: Format,
    pub out: PathBuf,
    pub emit_plot_script: bool,
}

fn positive(field: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(HarnessError::validation(field, format!("must be positive and finite, got {v}")))
    }
}

impl Settings {
    pub fn resolve(file: FileConfig, flags: Overrides) -> Result<Self> {
        let g = file.geometry;
        let b = file.bath;
        let p = file.paths;
        let s = file.sweep;
        let o = file.output;

        let n = flags.n.or(p.n.map(OneOrMany::into_vec));
        if let Some(ns) = &n {
            if ns.is_empty() {
                return Err(HarnessError::validation("paths.n", "empty list"));
            }
            if let Some(&bad) = ns.iter().find(|&&v| v < 2) {
                return Err(HarnessError::validation("paths.n", format!("need at least 2 paths, got {bad}")));
            }
        }

        let beta = flags.beta.or(p.beta);
        if let Some(b) = beta {
            if !(0.0..=1.0).contains(&b) {
                return Err(HarnessError::validation("paths.beta", format!("must lie in [0, 1], got {b}")));
            }
        }

        let pi_path = flags.pi_path.or(p.pi_path).map(|i| i.checked_sub(1));
        if let (Some(Some(i)), Some(ns)) = (pi_path, &n) {
            if let Some(&small) = ns.iter().find(|&&v| i >= v) {
                return Err(HarnessError::validation(
                    "paths.pi_path",
                    format!("path {} does not exist for n = {small}", i + 1),
                ));
            }
        }

        let amplitudes = p.amplitudes;
        if let Some(a) = &amplitudes {
            if let Some(&bad) = a.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
                return Err(HarnessError::validation("paths.amplitudes", format!("magnitudes must be non-negative, got {bad}")));
            }
            let norm: f64 = a.iter().map(|v| v * v).sum();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(HarnessError::validation("paths.amplitudes", format!("squared magnitudes sum to {norm}, not 1")));
            }
            if let Some(ns) = &n {
                if ns.iter().any(|&v| v != a.len()) {
                    return Err(HarnessError::validation("paths.amplitudes", format!("{} values for n = {ns:?}", a.len())));
                }
            }
        }

        // A command-line time mode replaces the other mode from the file.
        let (gamma, t_over_tau) = match (flags.gamma, flags.t_over_tau) {
            (Some(_), Some(_)) => {
                return Err(HarnessError::validation("bath", "give either gamma or t_over_tau, not both"))
            }
            (Some(g), None) => (Some(g), None),
            (None, Some(t)) => (None, Some(t)),
            (None, None) => (b.gamma, b.t_over_tau.map(OneOrMany::into_vec)),
        };
        if gamma.is_some() && t_over_tau.is_some() {
            return Err(HarnessError::validation("bath", "give either gamma or t_over_tau, not both"));
        }
        let gamma = gamma.map(|v| positive("bath.gamma", v)).transpose()?;
        if let Some(ts) = &t_over_tau {
            if ts.is_empty() {
                return Err(HarnessError::validation("bath.t_over_tau", "empty list"));
            }
            if let Some(&bad) = ts.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
                return Err(HarnessError::validation("bath.t_over_tau", format!("must be non-negative, got {bad}")));
            }
        }

        let samples = flags.samples.or(s.samples);
        if let Some(v) = samples {
            if v < multipath_core::fringe::MIN_SAMPLES {
                return Err(HarnessError::validation(
                    "sweep.samples",
                    format!("need at least {}, got {v}", multipath_core::fringe::MIN_SAMPLES),
                ));
            }
        }
        let points = flags.points.or(s.points);
        if let Some(v) = points {
            if v < 2 {
                return Err(HarnessError::validation("sweep.points", format!("need at least 2, got {v}")));
            }
        }

        Ok(Self {
            n,
            beta,
            pi_path,
            amplitudes,
            ell: positive("geometry.ell", g.ell.unwrap_or(neon::ELL))?,
            eps: positive("geometry.eps", g.eps.unwrap_or(neon::EPS))?,
            lambda: positive("geometry.lambda", g.lambda.unwrap_or(neon::LAMBDA))?,
            distance: positive("geometry.distance", g.distance.unwrap_or(neon::DISTANCE))?,
            temperature: positive("bath.temperature", b.temperature.unwrap_or(neon::TEMPERATURE))?,
            mass: positive("bath.mass", b.mass.unwrap_or(neon::MASS))?,
            gamma,
            flight_time: b.t.map(|v| positive("bath.t", v)).transpose()?,
            t_over_tau,
            samples,
            points,
            t_max: s.t_max.map(|v| positive("sweep.t_max", v)).transpose()?,
            x_periods: positive("sweep.x_periods", s.x_periods.unwrap_or(3.0))?,
            model: ScreenModel::parse(flags.model.as_deref().or(s.model.as_deref()).unwrap_or("selective"))?,
            format: Format::parse(flags.format.as_deref().or(o.format.as_deref()).unwrap_or("csv"))?,
            out: flags.out.or(o.dir).unwrap_or_else(|| PathBuf::from("out")),
            emit_plot_script: flags.emit_plot_script || o.emit_plot_script.unwrap_or(false),
        })
    }

    /// A single path count, for commands that take one.
    pub fn single_n(&self, default: usize) -> Result<usize> {
        match self.n.as_deref() {
            None => Ok(default),
            Some([n]) => Ok(*n),
            Some(list) => Err(HarnessError::validation("paths.n", format!("expected one value, got {list:?}"))),
        }
    }

    pub fn single_t_over_tau(&self) -> Result<Option<f64>> {
        match self.t_over_tau.as_deref() {
            None => Ok(None),
            Some([t]) => Ok(Some(*t)),
            Some(list) => Err(HarnessError::validation("bath.t_over_tau", format!("expected one value, got {list:?}"))),
        }
    }
}
