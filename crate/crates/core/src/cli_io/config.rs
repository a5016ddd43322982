//! Run configuration: flat `key = value [unit]` lines with dotted keys.
//!
//! ```text
//! # comment
//! model = zener                 # zener | modified | kelvin_voigt | discrete | continuum
//! medium.rho0 = 1000 kg/m^3
//! medium.c0 = 1540 m/s          # or medium.kappa0 = 4.2e-10 1/Pa
//! params.tau_sigma = 1 us
//! params.tau_eps = 1 ns
//! params.alpha = 0.5
//! params.beta = 0.5             # optional, defaults to alpha
//! sweep.omega_min = 1e3 rad/s
//! sweep.omega_max = 1e12 rad/s
//! sweep.points_per_decade = 20
//! tasks = dispersion, distribution, regimes, causality, fit
//! output.dir = out
//! output.svg = false
//! ```
//!
//! `discrete` models list mechanisms as `discrete.<n>.tau` and
//! `discrete.<n>.kappa` with `n = 1, 2, ...`. `continuum` models take
//! `continuum.distribution = ml | ml_prime | file`, `continuum.file` for the
//! tabulated case, and optional bounds `continuum.omega_min`,
//! `continuum.omega_max` (default `0` and `inf`).
//!
//! The fit task reads `fit.model = zener | discrete`, `fit.mechanisms`, and
//! either `fit.target.file` or a synthetic power law `fit.target.eta`,
//! `fit.target.coefficient`, `fit.target.omega_min`, `fit.target.omega_max`,
//! `fit.target.samples`. Zener fits start from `params.*`.
//!
//! Quantities default to SI units when no unit is given. Relative input paths
//! are resolved against the directory of the configuration file.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::PathBuf;

use serde::Serialize;

use crate::relaxation_spectrum::Mechanism;

#[derive(Debug, Clone, PartialEq, Serialize, thiserror::Error)]
#[error("{}{field}: {message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(line: Option<usize>, field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            line,
            field: field.into(),
            message: message.into(),
        }
    }
}

type Parsed<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Medium {
    /// kg/m^3
    pub rho0: f64,
    /// 1/Pa
    pub kappa0: f64,
}

/// Relaxation times (s) and fractional orders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FractionalParams {
    pub tau_sigma: f64,
    pub tau_eps: f64,
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContinuumSource {
    Ml(FractionalParams),
    MlPrime(FractionalParams),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelSpec {
    Zener(FractionalParams),
    Modified(FractionalParams),
    KelvinVoigt { tau_sigma: f64, alpha: f64 },
    Discrete { mechanisms: Vec<Mechanism> },
    Continuum {
        source: ContinuumSource,
        omega_min: f64,
        omega_max: f64,
    },
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Zener(_) => "zener",
            ModelSpec::Modified(_) => "modified",
            ModelSpec::KelvinVoigt { .. } => "kelvin_voigt",
            ModelSpec::Discrete { .. } => "discrete",
            ModelSpec::Continuum { .. } => "continuum",
        }
    }

    /// Normalizing time for the `omega tau_sigma` output columns.
    pub fn tau_sigma(&self) -> Option<f64> {
        match self {
            ModelSpec::Zener(p) | ModelSpec::Modified(p) => Some(p.tau_sigma),
            ModelSpec::KelvinVoigt { tau_sigma, .. } => Some(*tau_sigma),
            ModelSpec::Continuum {
                source: ContinuumSource::Ml(p) | ContinuumSource::MlPrime(p),
                ..
            } => Some(p.tau_sigma),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sweep {
    /// rad/s
    pub omega_min: f64,
    /// rad/s
    pub omega_max: f64,
    pub points_per_decade: usize,
}

/// Minimum accepted sweep density.
pub const MIN_POINTS_PER_DECADE: usize = 4;

impl Sweep {
    pub fn grid(&self) -> Vec<f64> {
        let decades = (self.omega_max / self.omega_min).log10();
        let n = (decades * self.points_per_decade as f64).round().max(1.0) as usize + 1;
        crate::special::log_space(self.omega_min, self.omega_max, n)
    }

    pub fn validate(&self) -> Parsed<()> {
        if !(self.omega_min > 0.0 && self.omega_min.is_finite()) {
            return Err(ConfigError::new(None, "sweep.omega_min", "must be positive and finite"));
        }
        if !(self.omega_max > self.omega_min && self.omega_max.is_finite()) {
            return Err(ConfigError::new(
                None,
                "sweep.omega_max",
                "sweep is empty: omega_max must exceed omega_min",
            ));
        }
        if self.points_per_decade < MIN_POINTS_PER_DECADE {
            return Err(ConfigError::new(
                None,
                "sweep.points_per_decade",
                format!("need at least {MIN_POINTS_PER_DECADE} points per decade, got {}", self.points_per_decade),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Dispersion,
    Distribution,
    Regimes,
    Causality,
    Fit,
}

impl Task {
    pub const ALL: [Task; 5] = [Task::Dispersion, Task::Distribution, Task::Regimes, Task::Causality, Task::Fit];

    pub fn name(self) -> &'static str {
        match self {
            Task::Dispersion => "dispersion",
            Task::Distribution => "distribution",
            Task::Regimes => "regimes",
            Task::Causality => "causality",
            Task::Fit => "fit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetSpec {
    File(PathBuf),
    PowerLaw {
        eta: f64,
        coefficient: f64,
        omega_min: f64,
        omega_max: f64,
        samples: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    Zener,
    Discrete { mechanisms: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitSpec {
    pub model: FitModel,
    pub target: TargetSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputSpec {
    pub dir: PathBuf,
    pub svg: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub model: ModelSpec,
    pub medium: Medium,
    pub sweep: Sweep,
    pub tasks: Vec<Task>,
    pub fit: Option<FitSpec>,
    pub output: OutputSpec,
}

#[derive(Clone, Copy)]
enum Dim {
    Time,
    Compressibility,
    Speed,
    Density,
    Frequency,
    None,
}

impl Dim {
    fn si(self) -> &'static str {
        match self {
            Dim::Time => "s",
            Dim::Compressibility => "1/Pa",
            Dim::Speed => "m/s",
            Dim::Density => "kg/m^3",
            Dim::Frequency => "rad/s",
            Dim::None => "",
        }
    }

    fn factor(self, unit: &str) -> Option<f64> {
        let two_pi = 2.0 * std::f64::consts::PI;
        Some(match (self, unit) {
            (_, "") => 1.0,
            (Dim::Time, "s") => 1.0,
            (Dim::Time, "ms") => 1e-3,
            (Dim::Time, "us") => 1e-6,
            (Dim::Time, "ns") => 1e-9,
            (Dim::Time, "ps") => 1e-12,
            (Dim::Compressibility, "1/Pa" | "Pa^-1") => 1.0,
            (Dim::Compressibility, "1/kPa") => 1e-3,
            (Dim::Compressibility, "1/MPa") => 1e-6,
            (Dim::Compressibility, "1/GPa") => 1e-9,
            (Dim::Speed, "m/s") => 1.0,
            (Dim::Speed, "km/s") => 1e3,
            (Dim::Density, "kg/m^3") => 1.0,
            (Dim::Density, "g/cm^3") => 1e3,
            (Dim::Frequency, "rad/s") => 1.0,
            (Dim::Frequency, "Hz") => two_pi,
            (Dim::Frequency, "kHz") => two_pi * 1e3,
            (Dim::Frequency, "MHz") => two_pi * 1e6,
            _ => return None,
        })
    }
}

struct Entry {
    line: usize,
    value: String,
}

struct Entries {
    map: BTreeMap<String, Entry>,
}

impl Entries {
    fn parse(text: &str) -> Parsed<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::new(Some(line), content, "expected `key = value`"));
            };
            let key = key.trim();
            let valid = !key.is_empty()
                && key
                    .split('.')
                    .all(|s| !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'));
            if !valid {
                return Err(ConfigError::new(Some(line), key, "malformed key"));
            }
            let value = value.trim();
            if value.is_empty() {
                return Err(ConfigError::new(Some(line), key, "missing value"));
            }
            if let Some(previous) = map.insert(
                key.to_string(),
                Entry {
                    line,
                    value: value.to_string(),
                },
            ) {
                return Err(ConfigError::new(
                    Some(line),
                    key,
                    format!("duplicate key (first set on line {})", previous.line),
                ));
            }
        }
        Ok(Self { map })
    }

    fn take_str(&mut self, key: &str) -> Option<(usize, String)> {
        self.map.remove(key).map(|e| (e.line, e.value))
    }

    fn require_str(&mut self, key: &str) -> Parsed<(usize, String)> {
        self.take_str(key)
            .ok_or_else(|| ConfigError::new(None, key, "required key is missing"))
    }

    fn take_f64(&mut self, key: &str, dim: Dim) -> Parsed<Option<f64>> {
        let Some((line, value)) = self.take_str(key) else {
            return Ok(None);
        };
        let (number, unit) = match value.split_once(char::is_whitespace) {
            Some((n, u)) => (n, u.trim()),
            None => (value.as_str(), ""),
        };
        let x: f64 = number
            .parse()
            .map_err(|_| ConfigError::new(Some(line), key, format!("`{number}` is not a number")))?;
        if x.is_nan() {
            return Err(ConfigError::new(Some(line), key, "NaN is not accepted"));
        }
        let factor = dim.factor(unit).ok_or_else(|| {
            let expected = match dim {
                Dim::None => "no unit".to_string(),
                d => format!("a unit compatible with {}", d.si()),
            };
            ConfigError::new(Some(line), key, format!("unit `{unit}` not recognized; expected {expected}"))
        })?;
        Ok(Some(x * factor))
    }

    fn require_f64(&mut self, key: &str, dim: Dim) -> Parsed<f64> {
        self.take_f64(key, dim)?
            .ok_or_else(|| ConfigError::new(None, key, "required key is missing"))
    }

    fn take_usize(&mut self, key: &str) -> Parsed<Option<usize>> {
        let Some((line, value)) = self.take_str(key) else {
            return Ok(None);
        };
        value
            .parse()
            .map(Some)
            .map_err(|_| ConfigError::new(Some(line), key, format!("`{value}` is not a non-negative integer")))
    }

    fn take_bool(&mut self, key: &str) -> Parsed<Option<bool>> {
        let Some((line, value)) = self.take_str(key) else {
            return Ok(None);
        };
        match value.as_str() {
            "true" => Ok(Some(true)),
            "false" => Ok(Some(false)),
            _ => Err(ConfigError::new(Some(line), key, format!("`{value}` is not true or false"))),
        }
    }

    fn finish(self, model: &str) -> Parsed<()> {
        match self.map.into_iter().next() {
            None => Ok(()),
            Some((key, entry)) => Err(ConfigError::new(
                Some(entry.line),
                key,
                format!("unknown key or not used by model `{model}`"),
            )),
        }
    }
}

fn fractional(e: &mut Entries, beta_default: bool) -> Parsed<FractionalParams> {
    let tau_sigma = e.require_f64("params.tau_sigma", Dim::Time)?;
    let tau_eps = e.require_f64("params.tau_eps", Dim::Time)?;
    let alpha = e.require_f64("params.alpha", Dim::None)?;
    let beta = match e.take_f64("params.beta", Dim::None)? {
        Some(b) => b,
        None if beta_default => alpha,
        None => return Err(ConfigError::new(None, "params.beta", "required key is missing")),
    };
    Ok(FractionalParams {
        tau_sigma,
        tau_eps,
        alpha,
        beta,
    })
}

fn medium(e: &mut Entries) -> Parsed<Medium> {
    let rho0 = e.require_f64("medium.rho0", Dim::Density)?;
    let kappa0 = e.take_f64("medium.kappa0", Dim::Compressibility)?;
    let c0 = e.take_f64("medium.c0", Dim::Speed)?;
    let kappa0 = match (kappa0, c0) {
        (Some(k), None) => k,
        (None, Some(c)) => 1.0 / (rho0 * c * c),
        (Some(_), Some(_)) => {
            return Err(ConfigError::new(None, "medium.c0", "give either medium.c0 or medium.kappa0, not both"))
        }
        (None, None) => return Err(ConfigError::new(None, "medium.kappa0", "give medium.c0 or medium.kappa0")),
    };
    if !(rho0 > 0.0 && rho0.is_finite()) {
        return Err(ConfigError::new(None, "medium.rho0", "must be positive and finite"));
    }
    if !(kappa0 > 0.0 && kappa0.is_finite()) {
        return Err(ConfigError::new(None, "medium", "static compressibility must be positive and finite"));
    }
    Ok(Medium { rho0, kappa0 })
}

fn model(e: &mut Entries) -> Parsed<ModelSpec> {
    let (line, name) = e.require_str("model")?;
    Ok(match name.as_str() {
        "zener" => ModelSpec::Zener(fractional(e, true)?),
        "modified" => ModelSpec::Modified(fractional(e, false)?),
        "kelvin_voigt" => ModelSpec::KelvinVoigt {
            tau_sigma: e.require_f64("params.tau_sigma", Dim::Time)?,
            alpha: e.require_f64("params.alpha", Dim::None)?,
        },
        "discrete" => {
            let mut mechanisms = Vec::new();
            for n in 1.. {
                let tau = e.take_f64(&format!("discrete.{n}.tau"), Dim::Time)?;
                let kappa = e.take_f64(&format!("discrete.{n}.kappa"), Dim::Compressibility)?;
                match (tau, kappa) {
                    (Some(tau), Some(kappa)) => mechanisms.push(Mechanism { tau, kappa }),
                    (None, None) => break,
                    _ => {
                        return Err(ConfigError::new(
                            None,
                            format!("discrete.{n}"),
                            "each mechanism needs both tau and kappa",
                        ))
                    }
                }
            }
            if mechanisms.is_empty() {
                return Err(ConfigError::new(None, "discrete.1.tau", "at least one mechanism is required"));
            }
            ModelSpec::Discrete { mechanisms }
        }
        "continuum" => {
            let (dline, dist) = e.require_str("continuum.distribution")?;
            let source = match dist.as_str() {
                "ml" => ContinuumSource::Ml(fractional(e, true)?),
                "ml_prime" => ContinuumSource::MlPrime(fractional(e, false)?),
                "file" => ContinuumSource::File(PathBuf::from(e.require_str("continuum.file")?.1)),
                other => {
                    return Err(ConfigError::new(
                        Some(dline),
                        "continuum.distribution",
                        format!("`{other}` is not one of ml, ml_prime, file"),
                    ))
                }
            };
            ModelSpec::Continuum {
                source,
                omega_min: e.take_f64("continuum.omega_min", Dim::Frequency)?.unwrap_or(0.0),
                omega_max: e.take_f64("continuum.omega_max", Dim::Frequency)?.unwrap_or(f64::INFINITY),
            }
        }
        other => {
            return Err(ConfigError::new(
                Some(line),
                "model",
                format!("`{other}` is not one of zener, modified, kelvin_voigt, discrete, continuum"),
            ))
        }
    })
}

fn tasks(e: &mut Entries) -> Parsed<Vec<Task>> {
    let (line, value) = e.require_str("tasks")?;
    let mut out = Vec::new();
    for word in value.split(',').map(str::trim) {
        let task = Task::ALL
            .into_iter()
            .find(|t| t.name() == word)
            .ok_or_else(|| ConfigError::new(Some(line), "tasks", format!("unknown task `{word}`")))?;
        if out.contains(&task) {
            return Err(ConfigError::new(Some(line), "tasks", format!("task `{word}` listed twice")));
        }
        out.push(task);
    }
    Ok(out)
}

fn fit(e: &mut Entries) -> Parsed<Option<FitSpec>> {
    let Some((line, name)) = e.take_str("fit.model") else {
        return Ok(None);
    };
    let model = match name.as_str() {
        "zener" => FitModel::Zener,
        "discrete" => FitModel::Discrete {
            mechanisms: e
                .take_usize("fit.mechanisms")?
                .ok_or_else(|| ConfigError::new(None, "fit.mechanisms", "required for discrete fits"))?,
        },
        other => {
            return Err(ConfigError::new(
                Some(line),
                "fit.model",
                format!("`{other}` is not one of zener, discrete"),
            ))
        }
    };
    let target = match e.take_str("fit.target.file") {
        Some((_, path)) => TargetSpec::File(PathBuf::from(path)),
        None => TargetSpec::PowerLaw {
            eta: e.require_f64("fit.target.eta", Dim::None)?,
            coefficient: e.require_f64("fit.target.coefficient", Dim::None)?,
            omega_min: e.require_f64("fit.target.omega_min", Dim::Frequency)?,
            omega_max: e.require_f64("fit.target.omega_max", Dim::Frequency)?,
            samples: e
                .take_usize("fit.target.samples")?
                .ok_or_else(|| ConfigError::new(None, "fit.target.samples", "required key is missing"))?,
        },
    };
    Ok(Some(FitSpec { model, target }))
}

impl RunConfig {
    /// Parse configuration text; semantic checks follow in [`RunConfig::validate`].
    pub fn parse(text: &str) -> Parsed<Self> {
        let mut e = Entries::parse(text)?;
        let model = model(&mut e)?;
        let medium = medium(&mut e)?;
        let sweep = Sweep {
            omega_min: e.require_f64("sweep.omega_min", Dim::Frequency)?,
            omega_max: e.require_f64("sweep.omega_max", Dim::Frequency)?,
            points_per_decade: e.take_usize("sweep.points_per_decade")?.unwrap_or(20),
        };
        let tasks = tasks(&mut e)?;
        let fit = fit(&mut e)?;
        let output = OutputSpec {
            dir: PathBuf::from(e.take_str("output.dir").map_or_else(|| "out".to_string(), |x| x.1)),
            svg: e.take_bool("output.svg")?.unwrap_or(false),
        };
        e.finish(model.name())?;
        let config = Self {
            model,
            medium,
            sweep,
            tasks,
            fit,
            output,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Parsed<()> {
        self.sweep.validate()?;
        if self.tasks.contains(&Task::Fit) && self.fit.is_none() {
            return Err(ConfigError::new(None, "fit.model", "the fit task needs a fit section"));
        }
        if let Some(FitSpec { model: FitModel::Zener, .. }) = &self.fit {
            if !matches!(self.model, ModelSpec::Zener(_)) {
                return Err(ConfigError::new(
                    None,
                    "fit.model",
                    "zener fits start from params.* and need model = zener",
                ));
            }
        }
        if let Some(FitSpec {
            model: FitModel::Discrete { mechanisms: 0 },
            ..
        }) = &self.fit
        {
            return Err(ConfigError::new(None, "fit.mechanisms", "must be at least 1"));
        }
        Ok(())
    }
}

fn num(out: &mut String, key: &str, x: f64, dim: Dim) {
    let unit = dim.si();
    if unit.is_empty() {
        let _ = writeln!(out, "{key} = {x:e}");
    } else {
        let _ = writeln!(out, "{key} = {x:e} {unit}");
    }
}

fn write_fractional(out: &mut String, p: &FractionalParams) {
    num(out, "params.tau_sigma", p.tau_sigma, Dim::Time);
    num(out, "params.tau_eps", p.tau_eps, Dim::Time);
    num(out, "params.alpha", p.alpha, Dim::None);
    num(out, "params.beta", p.beta, Dim::None);
}

/// Canonical text form; parsing it yields an identical configuration.
impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let _ = writeln!(out, "model = {}", self.model.name());
        num(&mut out, "medium.rho0", self.medium.rho0, Dim::Density);
        num(&mut out, "medium.kappa0", self.medium.kappa0, Dim::Compressibility);
        match &self.model {
            ModelSpec::Zener(p) | ModelSpec::Modified(p) => write_fractional(&mut out, p),
            ModelSpec::KelvinVoigt { tau_sigma, alpha } => {
                num(&mut out, "params.tau_sigma", *tau_sigma, Dim::Time);
                num(&mut out, "params.alpha", *alpha, Dim::None);
            }
            ModelSpec::Discrete { mechanisms } => {
                for (i, m) in mechanisms.iter().enumerate() {
                    num(&mut out, &format!("discrete.{}.tau", i + 1), m.tau, Dim::Time);
                    num(&mut out, &format!("discrete.{}.kappa", i + 1), m.kappa, Dim::Compressibility);
                }
            }
            ModelSpec::Continuum {
                source,
                omega_min,
                omega_max,
            } => {
                match source {
                    ContinuumSource::Ml(p) => {
                        let _ = writeln!(out, "continuum.distribution = ml");
                        write_fractional(&mut out, p);
                    }
                    ContinuumSource::MlPrime(p) => {
                        let _ = writeln!(out, "continuum.distribution = ml_prime");
                        write_fractional(&mut out, p);
                    }
                    ContinuumSource::File(path) => {
                        let _ = writeln!(out, "continuum.distribution = file");
                        let _ = writeln!(out, "continuum.file = {}", path.display());
                    }
                }
                num(&mut out, "continuum.omega_min", *omega_min, Dim::Frequency);
                num(&mut out, "continuum.omega_max", *omega_max, Dim::Frequency);
            }
        }
        num(&mut out, "sweep.omega_min", self.sweep.omega_min, Dim::Frequency);
        num(&mut out, "sweep.omega_max", self.sweep.omega_max, Dim::Frequency);
        let _ = writeln!(out, "sweep.points_per_decade = {}", self.sweep.points_per_decade);
        let names: Vec<&str> = self.tasks.iter().map(|t| t.name()).collect();
        let _ = writeln!(out, "tasks = {}", names.join(", "));
        if let Some(fit) = &self.fit {
            match fit.model {
                FitModel::Zener => {
                    let _ = writeln!(out, "fit.model = zener");
                }
                FitModel::Discrete { mechanisms } => {
                    let _ = writeln!(out, "fit.model = discrete");
                    let _ = writeln!(out, "fit.mechanisms = {mechanisms}");
                }
            }
            match &fit.target {
                TargetSpec::File(path) => {
                    let _ = writeln!(out, "fit.target.file = {}", path.display());
                }
                TargetSpec::PowerLaw {
                    eta,
                    coefficient,
                    omega_min,
                    omega_max,
                    samples,
                } => {
                    num(&mut out, "fit.target.eta", *eta, Dim::None);
                    num(&mut out, "fit.target.coefficient", *coefficient, Dim::None);
                    num(&mut out, "fit.target.omega_min", *omega_min, Dim::Frequency);
                    num(&mut out, "fit.target.omega_max", *omega_max, Dim::Frequency);
                    let _ = writeln!(out, "fit.target.samples = {samples}");
                }
            }
        }
        let _ = writeln!(out, "output.dir = {}", self.output.dir.display());
        let _ = writeln!(out, "output.svg = {}", self.output.svg);
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = "model = zener\nmedium.rho0 = 1 kg/m^3\nmedium.kappa0 = 1\n\
        params.tau_sigma = 1 s\nparams.tau_eps = 1 ms\nparams.alpha = 0.5\n\
        sweep.omega_min = 1e-6\nsweep.omega_max = 1e6\ntasks = dispersion\n";

    #[test]
    fn units_are_converted() {
        let c = RunConfig::parse(BASE).unwrap();
        let ModelSpec::Zener(p) = c.model else { panic!() };
        assert_eq!(p.tau_eps, 1e-3);
        assert_eq!(p.beta, 0.5);
        let hz = BASE.replace("sweep.omega_max = 1e6", "sweep.omega_max = 1 MHz");
        let c = RunConfig::parse(&hz).unwrap();
        assert!((c.sweep.omega_max - 2.0 * std::f64::consts::PI * 1e6).abs() < 1e-6);
    }

    #[test]
    fn diagnostics_name_line_and_field() {
        let bad = BASE.replace("params.tau_eps = 1 ms", "params.tau_eps = 1 furlong");
        let e = RunConfig::parse(&bad).unwrap_err();
        assert_eq!((e.line, e.field.as_str()), (Some(5), "params.tau_eps"));
        let e = RunConfig::parse(&format!("{BASE}bogus.key = 3\n")).unwrap_err();
        assert_eq!((e.line, e.field.as_str()), (Some(10), "bogus.key"));
        let e = RunConfig::parse(&format!("{BASE}params.alpha = 0.4\n")).unwrap_err();
        assert!(e.message.contains("duplicate"));
        let e = RunConfig::parse(&BASE.replace("1e6", "1e-6")).unwrap_err();
        assert_eq!(e.field, "sweep.omega_max");
        let e = RunConfig::parse(&format!("{BASE}sweep.points_per_decade = 3\n")).unwrap_err();
        assert_eq!(e.field, "sweep.points_per_decade");
    }

    #[test]
    fn canonical_text_round_trips() {
        let c = RunConfig::parse(BASE).unwrap();
        let again = RunConfig::parse(&c.to_string()).unwrap();
        assert_eq!(c, again);
        assert_eq!(c.to_string(), again.to_string());
    }
}
