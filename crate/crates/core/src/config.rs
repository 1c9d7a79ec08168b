//! Experiment configuration: line-oriented `key = value` text.
//!
//! Blank lines and text after `#` are ignored. Every key may also be given
//! on the command line as a flag of the same name.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::anneal::{CoolingLaw, Schedule, SchedulePlan, SweepLength};
use crate::context::{ContextShape, DEFAULT_RASTER_OFFSETS};
use crate::sources::SourceKind;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Block,
    Sb,
    Denoise,
    Oracle,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SourceConfig {
    Synthetic(SourceKind),
    /// A PBM image or a text file of symbol digits.
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ContextChoice {
    /// The default raster neighbourhood for images, `Previous` otherwise.
    Auto,
    /// The `k` preceding symbols in scan order.
    Previous,
    /// Explicit raster offsets `(dy, dx)`; images only.
    Raster(Vec<(isize, isize)>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScheduleKind {
    Geometric,
    Logarithmic,
}

/// Every documented key, in the order [`ExperimentConfig::to_text`] writes them.
pub const KEYS: &[&str] = &[
    "mode",
    "source",
    "n",
    "k",
    "kf",
    "alphas",
    "schedule",
    "gamma",
    "beta0",
    "t0",
    "c",
    "sweep",
    "r_mult",
    "seeds",
    "warm_start",
    "trace_stride",
    "delta",
    "markov_p",
    "window_m",
    "prefix",
    "tol",
    "slope_search",
    "context",
    "reference",
    "output",
];

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub source: SourceConfig,
    /// Length of synthetic sources.
    pub n: usize,
    /// Context order; `None` picks [`default_order`].
    pub k: Option<usize>,
    pub kf: usize,
    pub alphas: Vec<f64>,
    pub schedule: ScheduleKind,
    pub gamma: f64,
    pub beta0: f64,
    /// Logarithmic temperature constant; `None` uses the convergence bound scaled by `c`.
    pub t0: Option<f64>,
    pub c: f64,
    /// Sweep length; `None` means one sweep per coordinate.
    pub sweep: Option<u64>,
    /// Iterations per symbol (`r = r_mult * n`).
    pub r_mult: u64,
    pub seeds: Vec<u64>,
    pub warm_start: bool,
    pub trace_stride: Option<u64>,
    /// BSC crossover for denoising.
    pub delta: f64,
    /// Markov transition probability for the forward-backward reference.
    pub markov_p: Option<f64>,
    pub window_m: usize,
    pub prefix: usize,
    pub tol: f64,
    /// Denoising searches the slope when true, else uses the first of `alphas`.
    pub slope_search: bool,
    pub context: ContextChoice,
    /// Clean signal to score a denoised output against.
    pub reference: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            mode: Mode::Block,
            source: SourceConfig::Synthetic(SourceKind::Bernoulli(0.4)),
            n: 15_000,
            k: None,
            kf: 1,
            alphas: vec![4.0],
            schedule: ScheduleKind::Geometric,
            gamma: 0.75,
            beta0: 1.0,
            t0: None,
            c: 1.5,
            sweep: None,
            r_mult: 10,
            seeds: vec![1],
            warm_start: false,
            trace_stride: None,
            delta: 0.1,
            markov_p: None,
            window_m: 4,
            prefix: 10_000,
            tol: 0.05,
            slope_search: true,
            context: ContextChoice::Auto,
            reference: None,
            output: None,
        }
    }
}

/// `max(1, floor(log_A(n) / 2) - 1)`.
pub fn default_order(n: usize, alphabet: usize) -> usize {
    if n < 2 || alphabet < 2 {
        return 1;
    }
    let half = ((n as f64).ln() / (alphabet as f64).ln() / 2.0).floor() as usize;
    half.saturating_sub(1).max(1)
}

fn bad(key: &str, value: &str, why: impl fmt::Display) -> Error {
    Error::Config(format!("{key} = {value}: {why}"))
}

fn num<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e| bad(key, value, e))
}

fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    value.split(',').map(|v| num(key, v.trim())).collect()
}

/// `start:step:end` (inclusive) or a comma-separated list.
pub fn parse_alphas(value: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = value.split(':').map(str::trim).collect();
    let alphas = match parts.as_slice() {
        [single] => list("alphas", single)?,
        [start, step, end] => {
            let (a, s, b): (f64, f64, f64) = (num("alphas", start)?, num("alphas", step)?, num("alphas", end)?);
            if s == 0.0 || (b - a) * s < 0.0 {
                return Err(bad("alphas", value, "step does not move from start towards end"));
            }
            let count = ((b - a) / s + 1e-9).floor() as usize + 1;
            (0..count).map(|i| a + i as f64 * s).collect()
        }
        _ => return Err(bad("alphas", value, "expected start:step:end or a comma list")),
    };
    if alphas.iter().any(|a| !(*a >= 0.0) || !a.is_finite()) {
        return Err(bad("alphas", value, "slopes must be finite and non-negative"));
    }
    Ok(alphas)
}

fn parse_offsets(value: &str) -> Result<Vec<(isize, isize)>> {
    value
        .split(';')
        .map(|pair| {
            let (dy, dx) = pair
                .split_once(',')
                .ok_or_else(|| bad("context", value, "offsets are dy,dx pairs separated by ';'"))?;
            Ok((num("context", dy.trim())?, num("context", dx.trim())?))
        })
        .collect()
}

fn parse_source(value: &str) -> Result<SourceConfig> {
    let (kind, arg) = value
        .split_once(':')
        .ok_or_else(|| bad("source", value, "expected bernoulli:P, bsms:P or file:PATH"))?;
    Ok(match kind.trim() {
        "bernoulli" => SourceConfig::Synthetic(SourceKind::Bernoulli(num("source", arg.trim())?)),
        "bsms" => SourceConfig::Synthetic(SourceKind::Bsms(num("source", arg.trim())?)),
        "file" => SourceConfig::File(PathBuf::from(arg.trim())),
        other => return Err(bad("source", value, format!("unknown source kind {other:?}"))),
    })
}

fn bool_value(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(bad(key, value, "expected true or false")),
    }
}

fn optional<T: FromStr>(key: &str, value: &str) -> Result<Option<T>>
where
    T::Err: fmt::Display,
{
    if value == "none" {
        Ok(None)
    } else {
        num(key, value).map(Some)
    }
}

impl ExperimentConfig {
    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "mode" => {
                self.mode = match value {
                    "block" => Mode::Block,
                    "sb" => Mode::Sb,
                    "denoise" => Mode::Denoise,
                    "oracle" => Mode::Oracle,
                    _ => return Err(bad(key, value, "expected block, sb, denoise or oracle")),
                }
            }
            "source" => self.source = parse_source(value)?,
            "n" => self.n = num(key, value)?,
            "k" => self.k = if value == "auto" { None } else { Some(num(key, value)?) },
            "kf" => self.kf = num(key, value)?,
            "alphas" | "alpha" => self.alphas = parse_alphas(value)?,
            "schedule" => {
                self.schedule = match value {
                    "geometric" => ScheduleKind::Geometric,
                    "logarithmic" => ScheduleKind::Logarithmic,
                    _ => return Err(bad(key, value, "expected geometric or logarithmic")),
                }
            }
            "gamma" => self.gamma = num(key, value)?,
            "beta0" => self.beta0 = num(key, value)?,
            "t0" => self.t0 = optional(key, value)?,
            "c" => self.c = num(key, value)?,
            "sweep" => self.sweep = optional(key, value)?,
            "r_mult" => self.r_mult = num(key, value)?,
            "seeds" => {
                self.seeds = match value.split_once("..") {
                    Some((a, b)) => (num(key, a)?..num(key, b)?).collect(),
                    None => list(key, value)?,
                }
            }
            "warm_start" => self.warm_start = bool_value(key, value)?,
            "trace_stride" => self.trace_stride = optional(key, value)?,
            "delta" => self.delta = num(key, value)?,
            "markov_p" => self.markov_p = optional(key, value)?,
            "window_m" => self.window_m = num(key, value)?,
            "prefix" => self.prefix = num(key, value)?,
            "tol" => self.tol = num(key, value)?,
            "slope_search" => self.slope_search = bool_value(key, value)?,
            "context" => {
                self.context = match value {
                    "auto" => ContextChoice::Auto,
                    "previous" => ContextChoice::Previous,
                    "causal6" => ContextChoice::Raster(DEFAULT_RASTER_OFFSETS.to_vec()),
                    v => match v.strip_prefix("offsets:") {
                        Some(rest) => ContextChoice::Raster(parse_offsets(rest)?),
                        None => return Err(bad(key, value, "expected auto, previous, causal6 or offsets:dy,dx;...")),
                    },
                }
            }
            "reference" => self.reference = if value == "none" { None } else { Some(value.into()) },
            "output" => self.output = if value == "none" { None } else { Some(value.into()) },
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Applies every `key = value` line of `text` on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            self.set(key.trim(), value)
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Config(m.into()));
        if self.alphas.is_empty() {
            return fail("alphas must not be empty");
        }
        if self.seeds.is_empty() {
            return fail("seeds must not be empty");
        }
        if let SourceConfig::File(p) = &self.source {
            if !p.exists() {
                return Err(Error::Config(format!("input {} does not exist", p.display())));
            }
        } else if self.n == 0 {
            return fail("n must be positive");
        }
        if let Some(p) = &self.reference {
            if !p.exists() {
                return Err(Error::Config(format!("reference {} does not exist", p.display())));
            }
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return fail("gamma must lie in (0, 1)");
        }
        if !(self.beta0 > 0.0) {
            return fail("beta0 must be positive");
        }
        if self.t0.is_some_and(|t| !(t > 0.0)) {
            return fail("t0 must be positive");
        }
        if !(self.c > 1.0) {
            return fail("c must exceed 1");
        }
        if self.sweep == Some(0) {
            return fail("sweep must be positive");
        }
        if !(0.0..=1.0).contains(&self.delta) {
            return fail("delta must lie in [0, 1]");
        }
        if !(self.tol > 0.0) {
            return fail("tol must be positive");
        }
        Ok(())
    }

    /// Resolves [`ContextChoice::Auto`] against the kind of input.
    pub fn context_for(&self, dims: Option<(usize, usize)>) -> ContextChoice {
        match (&self.context, dims) {
            (ContextChoice::Auto, Some(_)) => ContextChoice::Raster(DEFAULT_RASTER_OFFSETS.to_vec()),
            (ContextChoice::Auto, None) => ContextChoice::Previous,
            (c, _) => c.clone(),
        }
    }

    /// Context order for `n` symbols over `alphabet`.
    pub fn order(&self, n: usize, alphabet: usize, dims: Option<(usize, usize)>) -> usize {
        match self.context_for(dims) {
            ContextChoice::Raster(offsets) => offsets.len(),
            _ => self.k.unwrap_or_else(|| default_order(n, alphabet)),
        }
    }

    /// Context shape for `n` symbols, or for an image when `dims` is given.
    pub fn shape(&self, n: usize, alphabet: usize, dims: Option<(usize, usize)>, cyclic: bool) -> Result<ContextShape> {
        match (self.context_for(dims), dims) {
            (ContextChoice::Raster(offsets), Some((w, h))) => ContextShape::raster(w, h, offsets),
            (ContextChoice::Raster(_), None) => Err(Error::Config("raster contexts need an image input".into())),
            _ => {
                let k = self.order(n, alphabet, dims);
                Ok(if cyclic { ContextShape::cyclic(k) } else { ContextShape::linear(k) })
            }
        }
    }

    /// Schedule for a chain over `coordinates` resampled entries. A logarithmic
    /// schedule without `t0` uses `T0 = c * L * delta_hat`.
    pub fn schedule(&self, coordinates: usize, delta_hat: f64) -> Result<Schedule> {
        let sweep = self.sweep.unwrap_or(coordinates as u64);
        match (self.schedule, self.t0) {
            (ScheduleKind::Geometric, _) => Schedule::geometric(self.beta0, self.gamma, sweep),
            (ScheduleKind::Logarithmic, Some(t0)) => Schedule::logarithmic(t0, sweep),
            (ScheduleKind::Logarithmic, None) => Schedule::convergent(delta_hat, self.c, sweep),
        }
    }

    /// Cooling plan for denoising. A logarithmic schedule without `t0` or
    /// `sweep` falls back to `beta_t = ln(t + 1) / 2`.
    pub fn denoise_plan(&self) -> SchedulePlan {
        match self.schedule {
            ScheduleKind::Geometric => SchedulePlan {
                law: CoolingLaw::Geometric {
                    beta0: self.beta0,
                    gamma: self.gamma,
                },
                sweep: self.sweep.map_or(SweepLength::Coordinates, SweepLength::Fixed),
            },
            ScheduleKind::Logarithmic => SchedulePlan {
                law: CoolingLaw::Logarithmic {
                    t0: self.t0.unwrap_or(2.0),
                },
                sweep: SweepLength::Fixed(self.sweep.unwrap_or(1)),
            },
        }
    }

    /// Serializes every key; [`ExperimentConfig::parse`] reads it back unchanged.
    pub fn to_text(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "none".into());
        let join = |v: Vec<String>| v.join(",");
        let mut out = String::new();
        for key in KEYS {
            let value = match *key {
                "mode" => match self.mode {
                    Mode::Block => "block",
                    Mode::Sb => "sb",
                    Mode::Denoise => "denoise",
                    Mode::Oracle => "oracle",
                }
                .to_string(),
                "source" => match &self.source {
                    SourceConfig::Synthetic(SourceKind::Bernoulli(p)) => format!("bernoulli:{p}"),
                    SourceConfig::Synthetic(SourceKind::Bsms(p)) => format!("bsms:{p}"),
                    SourceConfig::File(path) => format!("file:{}", path.display()),
                },
                "n" => self.n.to_string(),
                "k" => self.k.map_or("auto".into(), |k| k.to_string()),
                "kf" => self.kf.to_string(),
                "alphas" => join(self.alphas.iter().map(f64::to_string).collect()),
                "schedule" => match self.schedule {
                    ScheduleKind::Geometric => "geometric",
                    ScheduleKind::Logarithmic => "logarithmic",
                }
                .to_string(),
                "gamma" => self.gamma.to_string(),
                "beta0" => self.beta0.to_string(),
                "t0" => opt(self.t0.map(|v| v.to_string())),
                "c" => self.c.to_string(),
                "sweep" => opt(self.sweep.map(|v| v.to_string())),
                "r_mult" => self.r_mult.to_string(),
                "seeds" => join(self.seeds.iter().map(u64::to_string).collect()),
                "warm_start" => self.warm_start.to_string(),
                "trace_stride" => opt(self.trace_stride.map(|v| v.to_string())),
                "delta" => self.delta.to_string(),
                "markov_p" => opt(self.markov_p.map(|v| v.to_string())),
                "window_m" => self.window_m.to_string(),
                "prefix" => self.prefix.to_string(),
                "tol" => self.tol.to_string(),
                "slope_search" => self.slope_search.to_string(),
                "context" => match &self.context {
                    ContextChoice::Auto => "auto".into(),
                    ContextChoice::Previous => "previous".into(),
                    ContextChoice::Raster(o) => format!(
                        "offsets:{}",
                        o.iter().map(|(a, b)| format!("{a},{b}")).collect::<Vec<_>>().join(";")
                    ),
                },
                "reference" => opt(self.reference.as_ref().map(|p| p.display().to_string())),
                "output" => opt(self.output.as_ref().map(|p| p.display().to_string())),
                _ => unreachable!(),
            };
            out.push_str(&format!("{key} = {value}\n"));
        }
        out
    }
}
