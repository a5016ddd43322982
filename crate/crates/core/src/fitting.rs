//! Fit fractional Zener parameters or discrete relaxation mechanisms to a
//! target attenuation curve.
//!
//! Residuals are `sqrt(w_i) (ln alpha_model(omega_i) - ln alpha_target_i)`;
//! minimization uses a projected Levenberg-Marquardt iteration with analytic
//! Jacobians.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::constitutive::{check_admissibility, i_omega_pow, FractionalZenerParams};
use crate::error::{require_finite, require_positive, Error, Result};
use crate::relaxation_spectrum::{kappa_discrete, DiscreteRelaxationSet, Mechanism};
use crate::special::log_space;
use crate::table::read_two_column;

/// Target attenuation samples with weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttenuationTarget {
    omega: Vec<f64>,
    alpha_k: Vec<f64>,
    weights: Vec<f64>,
    band: (f64, f64),
}

impl AttenuationTarget {
    /// Unit-weight target over the span of the samples.
    pub fn new(omega: Vec<f64>, alpha_k: Vec<f64>) -> Result<Self> {
        let weights = vec![1.0; omega.len()];
        Self::with_weights(omega, alpha_k, weights)
    }

    pub fn with_weights(omega: Vec<f64>, alpha_k: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if omega.len() != alpha_k.len() || omega.len() != weights.len() || omega.is_empty() {
            return Err(Error::Domain("target columns must be non-empty and of equal length".into()));
        }
        for (i, &w) in omega.iter().enumerate() {
            require_positive("omega", w)?;
            if i > 0 && w <= omega[i - 1] {
                return Err(Error::Domain("target omega must be strictly increasing".into()));
            }
        }
        for &a in &alpha_k {
            require_finite("alpha_k", a)?;
            if a < 0.0 {
                return Err(Error::InvalidParameter {
                    name: "alpha_k",
                    value: a,
                    reason: "attenuation must be non-negative",
                });
            }
        }
        for &w in &weights {
            require_positive("weight", w)?;
        }
        let band = (omega[0], omega[omega.len() - 1]);
        Ok(Self {
            omega,
            alpha_k,
            weights,
            band,
        })
    }

    /// Read a two-column `(omega, alpha_k)` text file.
    pub fn from_file(path: &Path) -> Result<Self> {
        let t = read_two_column(path)?;
        Self::new(t.x, t.y).map_err(|e| Error::Table {
            path: path.to_path_buf(),
            line: 0,
            message: e.to_string(),
        })
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn alpha_k(&self) -> &[f64] {
        &self.alpha_k
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn band(&self) -> (f64, f64) {
        self.band
    }

    pub fn decades(&self) -> f64 {
        (self.band.1 / self.band.0).log10()
    }

    fn log_targets(&self) -> Vec<f64> {
        let peak = self.alpha_k.iter().cloned().fold(0.0, f64::max);
        let floor = if peak > 0.0 { 1e-300f64.max(peak * 1e-30) } else { 1e-300 };
        self.alpha_k.iter().map(|a| a.max(floor).ln()).collect()
    }
}

/// `coefficient * omega^eta` at `n_samples` log-spaced frequencies over `band`.
pub fn synthesize_powerlaw_target(
    eta: f64,
    coefficient: f64,
    band: (f64, f64),
    n_samples: usize,
) -> Result<AttenuationTarget> {
    require_finite("eta", eta)?;
    if !(0.0..=2.0).contains(&eta) {
        return Err(Error::InvalidParameter {
            name: "eta",
            value: eta,
            reason: "power-law exponent must lie in [0, 2]",
        });
    }
    require_positive("coefficient", coefficient)?;
    require_positive("omega_lo", band.0)?;
    require_positive("omega_hi", band.1)?;
    if band.1 <= band.0 {
        return Err(Error::Domain("band must satisfy omega_lo < omega_hi".into()));
    }
    if n_samples < 8 {
        return Err(Error::Domain(format!("need at least 8 samples, got {n_samples}")));
    }
    let omega = log_space(band.0, band.1, n_samples);
    let alpha_k = omega.iter().map(|w| coefficient * w.powf(eta)).collect();
    AttenuationTarget::new(omega, alpha_k)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult<P> {
    pub params: P,
    /// `sqrt(sum w r^2 / sum w)` of the log-attenuation residuals.
    pub residual_rms: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Stopping rules of the Levenberg-Marquardt iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Converged when `max_j |(J^T r)_j| / (|J_j| |r|)` falls below this.
    pub gradient_tol: f64,
    /// Converged when an accepted step is shorter than this (relative).
    pub step_tol: f64,
    pub max_iterations: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            gradient_tol: 1e-10,
            step_tol: 1e-12,
            max_iterations: 400,
        }
    }
}

trait LeastSquares {
    fn residuals(&self, theta: &DVector<f64>) -> Result<DVector<f64>>;
    fn jacobian(&self, theta: &DVector<f64>) -> Result<DMatrix<f64>>;
    fn lower(&self) -> DVector<f64>;
    fn upper(&self) -> DVector<f64>;
    /// Extra feasibility beyond the box, checked on trial points.
    fn feasible(&self, _theta: &DVector<f64>) -> bool {
        true
    }
}

struct Outcome {
    theta: DVector<f64>,
    cost: f64,
    iterations: usize,
    converged: bool,
}

fn project(theta: &DVector<f64>, lo: &DVector<f64>, hi: &DVector<f64>) -> DVector<f64> {
    DVector::from_iterator(
        theta.len(),
        theta.iter().zip(lo.iter().zip(hi.iter())).map(|(t, (l, h))| t.clamp(*l, *h)),
    )
}

fn levenberg_marquardt<P: LeastSquares>(problem: &P, theta0: DVector<f64>, opts: &FitOptions) -> Result<Outcome> {
    let (lo, hi) = (problem.lower(), problem.upper());
    let mut theta = project(&theta0, &lo, &hi);
    let mut r = problem.residuals(&theta)?;
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        iterations += 1;
        if cost == 0.0 {
            converged = true;
            break;
        }
        let j = problem.jacobian(&theta)?;
        let g = j.transpose() * &r;
        // scaled gradient, ignoring components pinned at a bound
        let rnorm = r.norm();
        let mut gmax: f64 = 0.0;
        for k in 0..theta.len() {
            let at_lo = theta[k] <= lo[k] && g[k] > 0.0;
            let at_hi = theta[k] >= hi[k] && g[k] < 0.0;
            if at_lo || at_hi {
                continue;
            }
            let cn = j.column(k).norm();
            if cn > 0.0 {
                gmax = gmax.max(g[k].abs() / (cn * rnorm));
            }
        }
        if gmax < opts.gradient_tol {
            converged = true;
            break;
        }
        let jtj = j.transpose() * &j;
        let mut accepted = false;
        for _ in 0..40 {
            let mut a = jtj.clone();
            for k in 0..theta.len() {
                a[(k, k)] += lambda * jtj[(k, k)].max(1e-12);
            }
            let step = match a.cholesky() {
                Some(c) => c.solve(&(-&g)),
                None => {
                    lambda *= 10.0;
                    continue;
                }
            };
            let trial = project(&(&theta + &step), &lo, &hi);
            if !problem.feasible(&trial) {
                lambda *= 10.0;
                continue;
            }
            let r_trial = match problem.residuals(&trial) {
                Ok(v) if v.iter().all(|x| x.is_finite()) => v,
                _ => {
                    lambda *= 10.0;
                    continue;
                }
            };
            let c_trial = r_trial.norm_squared();
            if c_trial < cost {
                let moved = (&trial - &theta).norm();
                theta = trial;
                r = r_trial;
                let small_step = moved <= opts.step_tol * (theta.norm() + opts.step_tol);
                cost = c_trial;
                lambda = (lambda / 10.0).max(1e-12);
                accepted = true;
                if small_step {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
        }
        if converged {
            break;
        }
        if !accepted {
            // no descent direction left at machine resolution
            converged = true;
            break;
        }
    }
    Ok(Outcome {
        theta,
        cost,
        iterations,
        converged,
    })
}

fn rms(target: &AttenuationTarget, cost: f64) -> f64 {
    (cost / target.weights.iter().sum::<f64>()).sqrt()
}

/// `(ln tau_sigma, ln(tau_sigma/tau_eps), alpha)` with `kappa0`, `rho0` fixed.
struct ZenerProblem<'a> {
    target: &'a AttenuationTarget,
    ln_target: Vec<f64>,
    kappa0: f64,
    rho0: f64,
    center: f64,
}

impl ZenerProblem<'_> {
    fn params(&self, theta: &DVector<f64>) -> FractionalZenerParams {
        let tau_sigma = theta[0].exp();
        let tau_eps = (theta[0] - theta[1]).exp();
        FractionalZenerParams {
            kappa0: self.kappa0,
            tau_sigma,
            tau_eps,
            alpha: theta[2],
            beta: theta[2],
            rho0: self.rho0,
        }
    }

    /// Attenuation and its gradient with respect to theta at one frequency.
    fn attenuation(&self, p: &FractionalZenerParams, w: f64) -> Result<(f64, [f64; 3])> {
        let a = p.alpha;
        let zs = i_omega_pow(w, p.tau_sigma, a);
        let ze = i_omega_pow(w, p.tau_eps, a);
        let (n, d) = (1.0 + ze, 1.0 + zs);
        let kappa = p.kappa0 * n / d;
        if kappa.re <= 0.0 {
            return Err(Error::Domain("non-propagating iterate".into()));
        }
        let log_i = |tau: f64| Complex64::new((w * tau).ln(), std::f64::consts::FRAC_PI_2);
        // derivatives of kappa with respect to ln tau_sigma, ln tau_eps and alpha
        let dk_ls = -p.kappa0 * n * a * zs / (d * d);
        let dk_le = p.kappa0 * a * ze / d;
        let dk_a = p.kappa0 * (ze * log_i(p.tau_eps) / d - n * zs * log_i(p.tau_sigma) / (d * d));
        let root = (self.rho0 * kappa).sqrt();
        let k = w * root;
        let dk = |dkappa: Complex64| w * self.rho0 * dkappa / (2.0 * root);
        let alpha_k = -k.im;
        // theta0 = ln tau_sigma moves both times; theta1 = ln(tau_sigma/tau_eps)
        let g0 = -(dk(dk_ls) + dk(dk_le)).im;
        let g1 = dk(dk_le).im;
        let g2 = -dk(dk_a).im;
        Ok((alpha_k, [g0, g1, g2]))
    }
}

impl LeastSquares for ZenerProblem<'_> {
    fn residuals(&self, theta: &DVector<f64>) -> Result<DVector<f64>> {
        let p = self.params(theta);
        let mut r = DVector::zeros(self.target.omega.len());
        for (i, &w) in self.target.omega.iter().enumerate() {
            let (a, _) = self.attenuation(&p, w)?;
            if !(a > 0.0) {
                return Err(Error::Domain("non-positive model attenuation".into()));
            }
            r[i] = self.target.weights[i].sqrt() * (a.ln() - self.ln_target[i]);
        }
        Ok(r)
    }

    fn jacobian(&self, theta: &DVector<f64>) -> Result<DMatrix<f64>> {
        let p = self.params(theta);
        let mut j = DMatrix::zeros(self.target.omega.len(), 3);
        for (i, &w) in self.target.omega.iter().enumerate() {
            let (a, g) = self.attenuation(&p, w)?;
            let s = self.target.weights[i].sqrt() / a;
            for c in 0..3 {
                j[(i, c)] = s * g[c];
            }
        }
        Ok(j)
    }

    fn lower(&self) -> DVector<f64> {
        DVector::from_vec(vec![self.center - 46.0, 0.0, 0.01])
    }

    fn upper(&self) -> DVector<f64> {
        DVector::from_vec(vec![self.center + 46.0, 46.0, 1.0])
    }
}

/// Fit `tau_sigma`, `tau_eps` and `alpha = beta` with `kappa0` and `rho0`
/// taken from `init`.
pub fn fit_zener(target: &AttenuationTarget, init: &FractionalZenerParams) -> Result<FitResult<FractionalZenerParams>> {
    fit_zener_with(target, init, &FitOptions::default())
}

pub fn fit_zener_with(
    target: &AttenuationTarget,
    init: &FractionalZenerParams,
    opts: &FitOptions,
) -> Result<FitResult<FractionalZenerParams>> {
    init.validate()?;
    if !check_admissibility(init).admissible {
        return Err(Error::Domain("initial parameters must be admissible".into()));
    }
    if target.decades() < 2.0 {
        return Err(Error::Domain(format!(
            "target spans {:.2} decades; at least 2 are required",
            target.decades()
        )));
    }
    let center = -(target.band.0 * target.band.1).sqrt().ln();
    let problem = ZenerProblem {
        target,
        ln_target: target.log_targets(),
        kappa0: init.kappa0,
        rho0: init.rho0,
        center,
    };
    let theta0 = DVector::from_vec(vec![
        init.tau_sigma.ln(),
        (init.tau_sigma / init.tau_eps).ln(),
        init.alpha,
    ]);
    let out = levenberg_marquardt(&problem, theta0, opts)?;
    Ok(FitResult {
        params: problem.params(&out.theta),
        residual_rms: rms(target, out.cost),
        iterations: out.iterations,
        converged: out.converged,
    })
}

/// Initialization of [`fit_discrete`]: relaxation frequencies log-uniform over
/// the target band, equal strengths scaled by a one-dimensional search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscreteInit {
    pub kappa0: f64,
    pub rho0: f64,
}

/// Relaxation times may sit up to four decades outside the band (in ln units).
const TAU_MARGIN: f64 = 9.2;

/// `(ln tau_nu, ln kappa_nu)` pairs; `sum kappa_nu < kappa0` is enforced.
struct DiscreteProblem<'a> {
    target: &'a AttenuationTarget,
    ln_target: Vec<f64>,
    init: DiscreteInit,
    n: usize,
}

impl DiscreteProblem<'_> {
    fn set(&self, theta: &DVector<f64>) -> DiscreteRelaxationSet {
        DiscreteRelaxationSet {
            kappa0: self.init.kappa0,
            mechanisms: (0..self.n)
                .map(|v| Mechanism {
                    tau: theta[2 * v].exp(),
                    kappa: theta[2 * v + 1].exp(),
                })
                .collect(),
        }
    }

    fn attenuation(&self, s: &DiscreteRelaxationSet, w: f64, grad: Option<&mut [f64]>) -> Result<f64> {
        let kappa = kappa_discrete(s, w)?;
        if kappa.re <= 0.0 {
            return Err(Error::Domain("non-propagating iterate".into()));
        }
        let root = (self.init.rho0 * kappa).sqrt();
        let alpha_k = -(w * root).im;
        if let Some(g) = grad {
            let iw = Complex64::new(0.0, w);
            let dk = |dkappa: Complex64| w * self.init.rho0 * dkappa / (2.0 * root);
            for (v, m) in s.mechanisms.iter().enumerate() {
                let den = 1.0 + iw * m.tau;
                let d_ln_kappa = -iw * m.kappa * m.tau / den;
                let d_ln_tau = -iw * m.kappa * m.tau / (den * den);
                g[2 * v] = -dk(d_ln_tau).im;
                g[2 * v + 1] = -dk(d_ln_kappa).im;
            }
        }
        Ok(alpha_k)
    }
}

impl LeastSquares for DiscreteProblem<'_> {
    fn residuals(&self, theta: &DVector<f64>) -> Result<DVector<f64>> {
        let s = self.set(theta);
        let mut r = DVector::zeros(self.target.omega.len());
        for (i, &w) in self.target.omega.iter().enumerate() {
            let a = self.attenuation(&s, w, None)?;
            if !(a > 0.0) {
                return Err(Error::Domain("non-positive model attenuation".into()));
            }
            r[i] = self.target.weights[i].sqrt() * (a.ln() - self.ln_target[i]);
        }
        Ok(r)
    }

    fn jacobian(&self, theta: &DVector<f64>) -> Result<DMatrix<f64>> {
        let s = self.set(theta);
        let mut j = DMatrix::zeros(self.target.omega.len(), 2 * self.n);
        let mut g = vec![0.0; 2 * self.n];
        for (i, &w) in self.target.omega.iter().enumerate() {
            let a = self.attenuation(&s, w, Some(&mut g))?;
            let scale = self.target.weights[i].sqrt() / a;
            for c in 0..2 * self.n {
                j[(i, c)] = scale * g[c];
            }
        }
        Ok(j)
    }

    fn lower(&self) -> DVector<f64> {
        let ln_tau = -self.target.band.1.ln() - TAU_MARGIN;
        let ln_kappa = self.init.kappa0.ln() - 69.0;
        DVector::from_iterator(2 * self.n, (0..self.n).flat_map(|_| [ln_tau, ln_kappa]))
    }

    fn upper(&self) -> DVector<f64> {
        let ln_tau = -self.target.band.0.ln() + TAU_MARGIN;
        let ln_kappa = self.init.kappa0.ln();
        DVector::from_iterator(2 * self.n, (0..self.n).flat_map(|_| [ln_tau, ln_kappa]))
    }

    fn feasible(&self, theta: &DVector<f64>) -> bool {
        let total: f64 = (0..self.n).map(|v| theta[2 * v + 1].exp()).sum();
        total < self.init.kappa0
    }
}

fn discrete_problem<'a>(target: &'a AttenuationTarget, n: usize, init: DiscreteInit) -> DiscreteProblem<'a> {
    DiscreteProblem {
        target,
        ln_target: target.log_targets(),
        init,
        n,
    }
}

fn policy_start(problem: &DiscreteProblem) -> DVector<f64> {
    let (lo, hi) = problem.target.band;
    let n = problem.n;
    let mut taus = Vec::with_capacity(n);
    let (a, b) = (lo.ln(), hi.ln());
    for v in 0..n {
        let u = a + (b - a) * (v as f64 + 0.5) / n as f64;
        taus.push(-u);
    }
    // golden-section search for the common strength
    let cost = |ln_k: f64| -> f64 {
        let mut theta = Vec::with_capacity(2 * n);
        for t in &taus {
            theta.push(*t);
            theta.push(ln_k);
        }
        let theta = DVector::from_vec(theta);
        if !problem.feasible(&theta) {
            return f64::INFINITY;
        }
        problem
            .residuals(&theta)
            .map(|r| r.norm_squared())
            .unwrap_or(f64::INFINITY)
    };
    let upper = (0.999 * problem.init.kappa0 / n as f64).ln();
    let (mut x0, mut x1) = (upper - 46.0, upper);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = x1 - g * (x1 - x0);
    let mut d = x0 + g * (x1 - x0);
    let (mut fc, mut fd) = (cost(c), cost(d));
    for _ in 0..90 {
        if fc < fd {
            x1 = d;
            d = c;
            fd = fc;
            c = x1 - g * (x1 - x0);
            fc = cost(c);
        } else {
            x0 = c;
            c = d;
            fc = fd;
            d = x0 + g * (x1 - x0);
            fd = cost(d);
        }
    }
    let ln_k = 0.5 * (x0 + x1);
    let mut theta = Vec::with_capacity(2 * n);
    for t in taus {
        theta.push(t);
        theta.push(ln_k);
    }
    DVector::from_vec(theta)
}

/// Fit `n` Debye mechanisms with non-negative strengths.
///
/// Each size is fitted from the initialization policy and, for `n > 1`, also
/// from starts derived from the `n - 1` solution; the best is kept, so
/// residuals never increase with `n`.
pub fn fit_discrete(
    target: &AttenuationTarget,
    n: usize,
    init: DiscreteInit,
) -> Result<FitResult<DiscreteRelaxationSet>> {
    fit_discrete_with(target, n, init, &FitOptions::default())
}

pub fn fit_discrete_with(
    target: &AttenuationTarget,
    n: usize,
    init: DiscreteInit,
    opts: &FitOptions,
) -> Result<FitResult<DiscreteRelaxationSet>> {
    fit_discrete_path(target, n, init, opts).map(|mut path| path.pop().expect("n >= 1"))
}

/// Fits for every size `1..=n` on the same target.
pub fn fit_discrete_path(
    target: &AttenuationTarget,
    n: usize,
    init: DiscreteInit,
    opts: &FitOptions,
) -> Result<Vec<FitResult<DiscreteRelaxationSet>>> {
    if n == 0 {
        return Err(Error::Domain("need at least one mechanism".into()));
    }
    require_positive("kappa0", init.kappa0)?;
    require_positive("rho0", init.rho0)?;
    if !(target.band.1 > target.band.0) {
        return Err(Error::Domain("target band must be a finite interval".into()));
    }
    let mut path: Vec<FitResult<DiscreteRelaxationSet>> = Vec::with_capacity(n);
    let mut previous: Option<(DVector<f64>, f64)> = None;
    for size in 1..=n {
        let problem = discrete_problem(target, size, init);
        let fresh = levenberg_marquardt(&problem, policy_start(&problem), opts)?;
        let mut best = fresh;
        if let Some((theta_prev, _)) = &previous {
            for start in warm_starts(theta_prev, size - 1, target, init) {
                let warm = levenberg_marquardt(&problem, start, opts)?;
                if warm.cost < best.cost {
                    best = warm;
                }
            }
        }
        path.push(FitResult {
            params: problem.set(&best.theta),
            residual_rms: rms(target, best.cost),
            iterations: best.iterations,
            converged: best.converged,
        });
        previous = Some((best.theta.clone(), best.cost));
    }
    Ok(path)
}

/// Starts for `n_prev + 1` mechanisms from an `n_prev` solution: the strongest
/// mechanism split in two equal halves (same model, same residual) and a weak
/// extra mechanism at the band center.
fn warm_starts(
    theta_prev: &DVector<f64>,
    n_prev: usize,
    target: &AttenuationTarget,
    init: DiscreteInit,
) -> Vec<DVector<f64>> {
    let strongest = (0..n_prev)
        .max_by(|&x, &y| theta_prev[2 * x + 1].total_cmp(&theta_prev[2 * y + 1]))
        .unwrap_or(0);
    let mut split: Vec<f64> = theta_prev.iter().copied().collect();
    split[2 * strongest + 1] -= std::f64::consts::LN_2;
    split.push(split[2 * strongest]);
    split.push(split[2 * strongest + 1]);

    let total: f64 = (0..n_prev).map(|v| theta_prev[2 * v + 1].exp()).sum();
    let mut weak: Vec<f64> = theta_prev.iter().copied().collect();
    weak.push(-(target.band.0 * target.band.1).sqrt().ln());
    weak.push((1e-6 * (init.kappa0 - total).max(f64::MIN_POSITIVE)).ln());
    vec![DVector::from_vec(split), DVector::from_vec(weak)]
}

/// Discrete sets are admissible when all strengths are non-negative and
/// their sum stays below `kappa0` (positive high-frequency compressibility).
pub fn discrete_admissible(s: &DiscreteRelaxationSet) -> bool {
    s.validate().is_ok() && s.total_strength() < s.kappa0
}
