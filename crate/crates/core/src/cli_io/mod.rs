//! Configuration-driven runs: build a model, run the requested tasks and
//! write CSV tables, a JSON report and optional SVG plots.
//!
//! Every run writes `report.json` plus, per task:
//!
//! | task         | files |
//! |--------------|-------|
//! | dispersion   | `dispersion.csv`, `attenuation.csv`, `phase_speed.csv` |
//! | distribution | `distribution.csv` |
//! | regimes      | `regimes.csv` |
//! | causality    | `causality.csv` |
//! | fit          | `fit.csv` |
//!
//! Outputs depend only on the configuration, so reruns are byte-identical.

pub mod config;
pub mod csv;
pub mod svg;

use std::path::{Path, PathBuf};

use serde::Serialize;

pub use config::{
    ConfigError, ContinuumSource, FitModel, FitSpec, FractionalParams, Medium, ModelSpec, OutputSpec, RunConfig,
    Sweep, TargetSpec, Task, MIN_POINTS_PER_DECADE,
};
pub use csv::{emit_csv, Cell, Column, Table};

use crate::causality::{causality_report, kramers_kronig_check, CausalityReport, KramersKronig};
use crate::constitutive::{check_admissibility, Compressibility, ConstitutiveModel, FractionalZenerParams, ModifiedZenerParams};
use crate::dispersion::{attenuation_regimes, dispersion_sweep, AttenuationRegimes, DispersionResult};
use crate::error::Error;
use crate::fitting::{
    discrete_admissible, fit_discrete, fit_zener, synthesize_powerlaw_target, AttenuationTarget, DiscreteInit,
    FitResult,
};
use crate::regimes::RegimeSlope;
use crate::relaxation_spectrum::{
    distribution_regimes, kappa_ml_distribution, kappa_ml_prime, ml_atom, ContinuumDistribution,
    DiscreteRelaxationSet, DistributionKind, DistributionRegimes, TabulatedDistribution,
};

/// Failure of a run, with the process exit status it maps to.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("numerical failure in {module}: {source}")]
    Numeric {
        module: &'static str,
        #[source]
        source: Error,
    },
    #[error("output error: {0}")]
    Output(Error),
}

impl RunError {
    /// 2 for configuration and input errors, 3 for numerical failures,
    /// 1 when artifacts cannot be written.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numeric { .. } => 3,
            RunError::Output(_) => 1,
        }
    }
}

fn numeric(module: &'static str) -> impl Fn(Error) -> RunError {
    move |source| RunError::Numeric { module, source }
}

fn input_error(field: &str, e: Error) -> RunError {
    let line = match &e {
        Error::Table { line, .. } if *line > 0 => Some(*line),
        _ => None,
    };
    RunError::Config(ConfigError::new(line, field, e.to_string()))
}

/// Command-line adjustments applied on top of a parsed configuration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub out_dir: Option<PathBuf>,
    pub svg: bool,
    pub points_per_decade: Option<usize>,
    /// Run only the fit task.
    pub fit_only: bool,
}

impl Overrides {
    pub fn apply(&self, mut config: RunConfig) -> Result<RunConfig, RunError> {
        if let Some(dir) = &self.out_dir {
            config.output.dir = dir.clone();
        }
        config.output.svg |= self.svg;
        if let Some(n) = self.points_per_decade {
            config.sweep.points_per_decade = n;
        }
        if self.fit_only {
            config.tasks = vec![Task::Fit];
        }
        config.validate()?;
        Ok(config)
    }
}

/// Read and parse a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig, RunError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| RunError::Config(ConfigError::new(None, path.display().to_string(), e.to_string())))?;
    Ok(RunConfig::parse(&text)?)
}

/// Cap the worker pool at `FRACWAVE_THREADS` when it is set.
pub fn configure_threads() -> Result<Option<usize>, ConfigError> {
    let Ok(value) = std::env::var("FRACWAVE_THREADS") else {
        return Ok(None);
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| ConfigError::new(None, "FRACWAVE_THREADS", format!("`{value}` is not a positive integer")))?;
    // a pool configured earlier in the process wins
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(Some(n))
}

enum Built {
    Constitutive(ConstitutiveModel),
    Discrete(DiscreteRelaxationSet),
    Continuum(ContinuumDistribution),
}

impl Built {
    fn medium(&self) -> &dyn Compressibility {
        match self {
            Built::Constitutive(m) => m,
            Built::Discrete(s) => s,
            Built::Continuum(d) => d,
        }
    }
}

fn zener_params(p: &FractionalParams, m: &Medium) -> FractionalZenerParams {
    FractionalZenerParams {
        kappa0: m.kappa0,
        tau_sigma: p.tau_sigma,
        tau_eps: p.tau_eps,
        alpha: p.alpha,
        beta: p.beta,
        rho0: m.rho0,
    }
}

fn params_error(e: Error) -> RunError {
    RunError::Config(ConfigError::new(None, "params", e.to_string()))
}

fn build(config: &RunConfig, base: &Path) -> Result<Built, RunError> {
    let m = &config.medium;
    Ok(match &config.model {
        ModelSpec::Zener(p) => {
            let z = zener_params(p, m);
            z.validate().map_err(params_error)?;
            Built::Constitutive(ConstitutiveModel::Zener(z))
        }
        ModelSpec::Modified(p) => {
            let z = zener_params(p, m);
            Built::Constitutive(ConstitutiveModel::Modified(ModifiedZenerParams::new(z).map_err(params_error)?))
        }
        ModelSpec::KelvinVoigt { tau_sigma, alpha } => {
            let z = FractionalZenerParams {
                kappa0: m.kappa0,
                tau_sigma: *tau_sigma,
                // not used by the Kelvin-Voigt law
                tau_eps: *tau_sigma,
                alpha: *alpha,
                beta: *alpha,
                rho0: m.rho0,
            };
            z.validate().map_err(params_error)?;
            Built::Constitutive(ConstitutiveModel::KelvinVoigt(z))
        }
        ModelSpec::Discrete { mechanisms } => Built::Discrete(
            DiscreteRelaxationSet::new(m.kappa0, mechanisms.clone())
                .map_err(|e| RunError::Config(ConfigError::new(None, "discrete", e.to_string())))?,
        ),
        ModelSpec::Continuum {
            source,
            omega_min,
            omega_max,
        } => {
            let kind = match source {
                ContinuumSource::Ml(p) => DistributionKind::Ml(zener_params(p, m)),
                ContinuumSource::MlPrime(p) => DistributionKind::MlPrime(zener_params(p, m)),
                ContinuumSource::File(path) => DistributionKind::Tabulated(
                    TabulatedDistribution::from_file(m.kappa0, &base.join(path))
                        .map_err(|e| input_error("continuum.file", e))?,
                ),
            };
            Built::Continuum(
                ContinuumDistribution::new(kind, *omega_min, *omega_max)
                    .map_err(|e| RunError::Config(ConfigError::new(None, "continuum", e.to_string())))?,
            )
        }
    })
}

fn check_tasks(config: &RunConfig) -> Result<(), RunError> {
    let unsupported = |task: Task, why: &str| {
        Err(RunError::Config(ConfigError::new(
            None,
            "tasks",
            format!("task `{}` is not available for model `{}`: {why}", task.name(), config.model.name()),
        )))
    };
    for &task in &config.tasks {
        match (task, &config.model) {
            (Task::Distribution, ModelSpec::Zener(p)) if p.alpha > p.beta => {
                return unsupported(task, "no distribution is defined for alpha > beta")
            }
            (Task::Distribution, ModelSpec::Zener(_) | ModelSpec::Continuum { .. }) => {}
            (Task::Distribution, _) => return unsupported(task, "no continuous relaxation distribution"),
            (Task::Regimes, ModelSpec::Zener(p)) if p.alpha != p.beta => {
                return unsupported(task, "power-law regimes need alpha = beta")
            }
            (Task::Regimes, ModelSpec::Zener(_)) => {}
            (Task::Regimes, _) => return unsupported(task, "power-law regimes are defined for the zener model"),
            _ => {}
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DispersionSummary {
    pub points: usize,
    pub c_p_min: f64,
    pub c_p_max: f64,
    pub alpha_k_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionSummary {
    pub points: usize,
    pub min_value: f64,
    /// `(Omega, weight)` of a point mass excluded from the tabulated density.
    pub atom: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimesReport {
    pub attenuation: AttenuationRegimes,
    /// `None` for `alpha = 1`, whose distribution is a single mechanism.
    pub distribution: Option<DistributionRegimes>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CausalityOutcome {
    /// Full report for the fractional Zener model.
    Zener(CausalityReport),
    /// Kramers-Kronig consistency of the sampled dispersion only.
    Sampled(KramersKronig),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FitOutcome {
    Zener {
        result: FitResult<FractionalZenerParams>,
        admissible: bool,
    },
    Discrete {
        result: FitResult<DiscreteRelaxationSet>,
        admissible: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct TaskReports {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dispersion: Option<DispersionSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distribution: Option<DistributionSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regimes: Option<RegimesReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub causality: Option<CausalityOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub model: ModelSpec,
    pub medium: Medium,
    pub sweep: Sweep,
    pub tasks: TaskReports,
    /// File names written into the output directory, in order.
    pub artifacts: Vec<String>,
}

struct Writer {
    dir: PathBuf,
    svg: bool,
    artifacts: Vec<String>,
}

impl Writer {
    fn csv(&mut self, name: &str, table: &Table) -> Result<(), RunError> {
        emit_csv(table, &self.dir.join(name)).map_err(RunError::Output)?;
        self.artifacts.push(name.to_string());
        Ok(())
    }

    fn text(&mut self, name: &str, text: &str) -> Result<(), RunError> {
        let path = self.dir.join(name);
        std::fs::write(&path, text).map_err(|source| RunError::Output(Error::Io { path, source }))?;
        self.artifacts.push(name.to_string());
        Ok(())
    }

    fn plot(&mut self, name: &str, title: &str, labels: (&str, &str), x: &[f64], y: &[f64]) -> Result<(), RunError> {
        if self.svg {
            self.text(name, &svg::loglog_plot(title, labels.0, labels.1, x, y))?;
        }
        Ok(())
    }
}

fn x_axis(tau_sigma: Option<f64>, omega: &[f64], symbol: &str) -> (Vec<f64>, String) {
    match tau_sigma {
        Some(t) => (omega.iter().map(|w| w * t).collect(), format!("{symbol} tau_sigma")),
        None => (omega.to_vec(), format!("{symbol} (rad/s)")),
    }
}

/// Run every task of `config`; relative input paths are resolved against
/// `base_dir`.
pub fn run(config: &RunConfig, base_dir: &Path) -> Result<Report, RunError> {
    config.validate()?;
    check_tasks(config)?;
    let model = build(config, base_dir)?;
    let tau_sigma = config.model.tau_sigma();
    let grid = config.sweep.grid();
    std::fs::create_dir_all(&config.output.dir).map_err(|source| {
        RunError::Output(Error::Io {
            path: config.output.dir.clone(),
            source,
        })
    })?;
    let mut out = Writer {
        dir: config.output.dir.clone(),
        svg: config.output.svg,
        artifacts: Vec::new(),
    };
    let mut reports = TaskReports::default();
    let mut sweep_cache: Option<DispersionResult> = None;
    let mut sweep = |model: &Built| -> Result<DispersionResult, RunError> {
        if let Some(d) = &sweep_cache {
            return Ok(d.clone());
        }
        let d = dispersion_sweep(model.medium(), config.medium.rho0, &grid).map_err(numeric("dispersion"))?;
        sweep_cache = Some(d.clone());
        Ok(d)
    };

    for &task in &config.tasks {
        match task {
            Task::Dispersion => {
                let d = sweep(&model)?;
                out.csv("dispersion.csv", &csv::dispersion_table(&d, tau_sigma))?;
                out.csv(
                    "attenuation.csv",
                    &csv::pane_table(&d.omega, tau_sigma, "alpha_k", "Np/m", &d.alpha_k),
                )?;
                out.csv("phase_speed.csv", &csv::pane_table(&d.omega, tau_sigma, "c_p", "m/s", &d.c_p))?;
                let (x, xl) = x_axis(tau_sigma, &d.omega, "omega");
                out.plot("attenuation.svg", "Attenuation", (&xl, "alpha_k (Np/m)"), &x, &d.alpha_k)?;
                out.plot("phase_speed.svg", "Phase speed", (&xl, "c_p (m/s)"), &x, &d.c_p)?;
                let fold = |v: &[f64], f: fn(f64, f64) -> f64, init: f64| v.iter().copied().fold(init, f);
                reports.dispersion = Some(DispersionSummary {
                    points: d.len(),
                    c_p_min: fold(&d.c_p, f64::min, f64::INFINITY),
                    c_p_max: fold(&d.c_p, f64::max, f64::NEG_INFINITY),
                    alpha_k_max: fold(&d.alpha_k, f64::max, f64::NEG_INFINITY),
                });
            }
            Task::Distribution => {
                let (values, atom) = distribution_values(&model, &grid)?;
                out.csv("distribution.csv", &csv::distribution_table(&grid, &values, tau_sigma))?;
                let (x, xl) = x_axis(tau_sigma, &grid, "Omega");
                out.plot("distribution.svg", "Relaxation distribution", (&xl, "kappa_nu (s/Pa)"), &x, &values)?;
                reports.distribution = Some(DistributionSummary {
                    points: values.len(),
                    min_value: values.iter().copied().fold(f64::INFINITY, f64::min),
                    atom,
                });
            }
            Task::Regimes => {
                let Built::Constitutive(ConstitutiveModel::Zener(p)) = &model else {
                    unreachable!("checked by check_tasks")
                };
                let attenuation = attenuation_regimes(p).map_err(numeric("dispersion"))?;
                let distribution = if p.alpha < 1.0 {
                    Some(distribution_regimes(p).map_err(numeric("relaxation_spectrum"))?)
                } else {
                    None
                };
                out.csv("regimes.csv", &regimes_table(&attenuation, distribution.as_ref()))?;
                reports.regimes = Some(RegimesReport {
                    attenuation,
                    distribution,
                });
            }
            Task::Causality => {
                let outcome = match &model {
                    Built::Constitutive(ConstitutiveModel::Zener(p)) => {
                        CausalityOutcome::Zener(causality_report(p, &grid).map_err(numeric("causality"))?)
                    }
                    other => {
                        let d = sweep(other)?;
                        let reference = (grid[0] * grid[grid.len() - 1]).sqrt();
                        CausalityOutcome::Sampled(kramers_kronig_check(&d, reference).map_err(numeric("causality"))?)
                    }
                };
                out.csv("causality.csv", &causality_table(&outcome))?;
                reports.causality = Some(outcome);
            }
            Task::Fit => {
                let fit = config.fit.as_ref().expect("validated");
                let target = load_target(&fit.target, base_dir)?;
                let outcome = run_fit(config, fit, &target)?;
                let (fitted, name) = fitted_attenuation(&outcome, config.medium.rho0, target.omega())?;
                let table = Table {
                    columns: vec![
                        Column::new("omega", "rad/s", target.omega().iter().copied()),
                        Column::new("alpha_target", "Np/m", target.alpha_k().iter().copied()),
                        Column::new(name, "Np/m", fitted.iter().copied()),
                    ],
                };
                out.csv("fit.csv", &table)?;
                out.plot("fit.svg", "Fitted attenuation", ("omega (rad/s)", "alpha_k (Np/m)"), target.omega(), &fitted)?;
                reports.fit = Some(outcome);
            }
        }
    }
    out.artifacts.push("report.json".into());
    let report = Report {
        model: config.model.clone(),
        medium: config.medium,
        sweep: config.sweep,
        tasks: reports,
        artifacts: out.artifacts.clone(),
    };
    let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
    json.push('\n');
    out.artifacts.pop();
    out.text("report.json", &json)?;
    Ok(report)
}

fn distribution_values(model: &Built, grid: &[f64]) -> Result<(Vec<f64>, Option<(f64, f64)>), RunError> {
    let err = numeric("relaxation_spectrum");
    match model {
        Built::Constitutive(ConstitutiveModel::Zener(p)) => {
            let values = if p.alpha == p.beta {
                grid.iter().map(|&w| kappa_ml_distribution(p, w)).collect::<Result<Vec<_>, _>>()
            } else {
                grid.iter().map(|&w| kappa_ml_prime(p, w)).collect::<Result<Vec<_>, _>>()
            };
            let atom = if p.alpha == p.beta { ml_atom(p) } else { None };
            Ok((values.map_err(err)?, atom))
        }
        Built::Continuum(d) => Ok((
            grid.iter().map(|&w| d.density(w)).collect::<Result<Vec<_>, _>>().map_err(err)?,
            None,
        )),
        _ => unreachable!("checked by check_tasks"),
    }
}

fn regimes_table(a: &AttenuationRegimes, d: Option<&DistributionRegimes>) -> Table {
    let mut rows: Vec<(String, RegimeSlope)> = vec![("attenuation_low".into(), a.low)];
    rows.extend(a.mid.map(|m| ("attenuation_mid".to_string(), m)));
    rows.push(("attenuation_high".into(), a.high));
    if let Some(d) = d {
        rows.push(("distribution_low".into(), d.low));
        rows.push(("distribution_mid".into(), d.mid));
        rows.push(("distribution_high".into(), d.high));
    }
    Table {
        columns: vec![
            Column::cells("regime", "-", rows.iter().map(|r| Cell::Text(r.0.clone()))),
            Column::new("window_lo", "1", rows.iter().map(|r| r.1.window.lo)),
            Column::new("window_hi", "1", rows.iter().map(|r| r.1.window.hi)),
            Column::new("analytic_slope", "1", rows.iter().map(|r| r.1.analytic)),
            Column::cells("fitted_slope", "1", rows.iter().map(|r| Cell::from(r.1.fitted))),
        ],
    }
}

fn causality_table(outcome: &CausalityOutcome) -> Table {
    let b = |v: bool| Cell::Number(if v { 1.0 } else { 0.0 });
    let rows: Vec<(&str, &'static str, Cell)> = match outcome {
        CausalityOutcome::Zener(r) => vec![
            ("kk_max_rel_error", "1", Cell::Number(r.kk_max_rel_error)),
            ("kk_reference_omega", "rad/s", Cell::Number(r.kk_reference_omega)),
            ("kk_subtractions", "1", Cell::Number(r.kk_subtractions as f64)),
            ("phase_speed_bounded", "bool", b(r.phase_speed_bounded)),
            ("c_infinity", "m/s", Cell::Number(r.c_infinity)),
            ("hf_attenuation_exponent", "1", Cell::Number(r.hf_attenuation_exponent)),
            ("distribution_nonnegative", "bool", b(r.distribution_nonnegative)),
            ("first_negative_omega", "rad/s", Cell::from(r.first_negative_omega)),
        ],
        CausalityOutcome::Sampled(k) => vec![
            ("kk_max_rel_error", "1", Cell::Number(k.max_rel_error)),
            ("kk_reference_omega", "rad/s", Cell::Number(k.reference_omega)),
            ("kk_tail_uncertainty", "1", Cell::Number(k.tail_uncertainty)),
            ("phase_speed_bounded", "bool", b(k.phase_speed_bounded)),
            ("hf_attenuation_exponent", "1", Cell::Number(k.hf_attenuation_exponent)),
        ],
    };
    Table {
        columns: vec![
            Column::cells("metric", "-", rows.iter().map(|r| Cell::Text(r.0.to_string()))),
            Column::cells("unit", "-", rows.iter().map(|r| Cell::Text(r.1.to_string()))),
            Column::cells("value", "-", rows.into_iter().map(|r| r.2)),
        ],
    }
}

fn load_target(spec: &TargetSpec, base: &Path) -> Result<AttenuationTarget, RunError> {
    match spec {
        TargetSpec::File(path) => {
            AttenuationTarget::from_file(&base.join(path)).map_err(|e| input_error("fit.target.file", e))
        }
        TargetSpec::PowerLaw {
            eta,
            coefficient,
            omega_min,
            omega_max,
            samples,
        } => synthesize_powerlaw_target(*eta, *coefficient, (*omega_min, *omega_max), *samples)
            .map_err(|e| RunError::Config(ConfigError::new(None, "fit.target", e.to_string()))),
    }
}

fn run_fit(config: &RunConfig, fit: &FitSpec, target: &AttenuationTarget) -> Result<FitOutcome, RunError> {
    let err = numeric("fitting");
    Ok(match fit.model {
        FitModel::Zener => {
            let ModelSpec::Zener(p) = &config.model else {
                unreachable!("checked by RunConfig::validate")
            };
            let result = fit_zener(target, &zener_params(p, &config.medium)).map_err(err)?;
            let admissible = check_admissibility(&result.params).admissible;
            FitOutcome::Zener { result, admissible }
        }
        FitModel::Discrete { mechanisms } => {
            let init = DiscreteInit {
                kappa0: config.medium.kappa0,
                rho0: config.medium.rho0,
            };
            let result = fit_discrete(target, mechanisms, init).map_err(err)?;
            let admissible = discrete_admissible(&result.params);
            FitOutcome::Discrete { result, admissible }
        }
    })
}

fn fitted_attenuation(outcome: &FitOutcome, rho0: f64, omega: &[f64]) -> Result<(Vec<f64>, &'static str), RunError> {
    let d = match outcome {
        FitOutcome::Zener { result, .. } => dispersion_sweep(&result.params, rho0, omega),
        FitOutcome::Discrete { result, .. } => dispersion_sweep(&result.params, rho0, omega),
    }
    .map_err(numeric("fitting"))?;
    Ok((d.alpha_k, "alpha_fit"))
}
