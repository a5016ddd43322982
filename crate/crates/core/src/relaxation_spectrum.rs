//! Multiple-relaxation (NSW) compressibility, discrete and continuum, and the
//! Mittag-Leffler relaxation distributions that make it coincide with the
//! fractional Zener model.
//!
//! A continuum of Debye mechanisms with weight `kappa_nu(Omega)` gives
//! `kappa(omega) = kappa0 - i omega int kappa_nu(Omega) / (Omega + i omega) dOmega`.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::constitutive::{Compressibility, FractionalZenerParams, ModifiedZenerParams};
use crate::error::{require_finite, require_positive, Error, Result};
use crate::quadrature::{breakpoints, integrate, QuadOptions};
use crate::regimes::{fit_loglog, RegimeSlope, RegimeWindows, Window};
use crate::special::{cos_pi, sin_pi};
use crate::table::read_two_column;

/// One Debye mechanism.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mechanism {
    /// Relaxation time (s).
    pub tau: f64,
    /// Compressibility contribution (1/Pa).
    pub kappa: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteRelaxationSet {
    pub kappa0: f64,
    pub mechanisms: Vec<Mechanism>,
}

impl DiscreteRelaxationSet {
    pub fn new(kappa0: f64, mechanisms: Vec<Mechanism>) -> Result<Self> {
        let s = Self { kappa0, mechanisms };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("kappa0", self.kappa0)?;
        for m in &self.mechanisms {
            require_positive("tau_nu", m.tau)?;
            require_finite("kappa_nu", m.kappa)?;
            if m.kappa < 0.0 {
                return Err(Error::InvalidParameter {
                    name: "kappa_nu",
                    value: m.kappa,
                    reason: "mechanism strengths must be non-negative",
                });
            }
        }
        Ok(())
    }

    /// `sum kappa_nu`, the compressibility lost between zero and infinite frequency.
    pub fn total_strength(&self) -> f64 {
        self.mechanisms.iter().map(|m| m.kappa).sum()
    }

    /// For a single mechanism, the classical Zener model (`alpha = beta = 1`)
    /// with the same compressibility: `tau_sigma = tau_1`,
    /// `tau_eps = tau_1 (1 - kappa_1/kappa0)`.
    pub fn matched_zener(&self, rho0: f64) -> Option<FractionalZenerParams> {
        match self.mechanisms.as_slice() {
            [m] if m.kappa < self.kappa0 => {
                let tau_eps = m.tau * (1.0 - m.kappa / self.kappa0);
                FractionalZenerParams::symmetric(self.kappa0, m.tau, tau_eps, 1.0, rho0).ok()
            }
            _ => None,
        }
    }

    /// `n` mechanisms at the log-midpoints of `[omega_lo, omega_hi]`, each
    /// carrying the distribution mass of its cell (midpoint rule in `ln Omega`).
    pub fn from_distribution(
        d: &ContinuumDistribution,
        n: usize,
        omega_lo: f64,
        omega_hi: f64,
    ) -> Result<Self> {
        require_positive("Omega_lo", omega_lo)?;
        require_positive("Omega_hi", omega_hi)?;
        if n == 0 || omega_hi <= omega_lo {
            return Err(Error::Domain("need n >= 1 and Omega_lo < Omega_hi".into()));
        }
        let du = (omega_hi / omega_lo).ln() / n as f64;
        let mut mechanisms = Vec::with_capacity(n);
        for j in 0..n {
            let w = omega_lo * ((j as f64 + 0.5) * du).exp();
            let kappa = d.density(w)? * w * du;
            mechanisms.push(Mechanism { tau: 1.0 / w, kappa });
        }
        Self::new(d.kappa0(), mechanisms)
    }
}

/// `kappa0 - i omega sum kappa_nu tau_nu / (1 + i omega tau_nu)`.
pub fn kappa_discrete(s: &DiscreteRelaxationSet, omega: f64) -> Result<Complex64> {
    require_positive("omega", omega)?;
    let iw = Complex64::new(0.0, omega);
    let sum: Complex64 = s
        .mechanisms
        .iter()
        .map(|m| m.kappa * m.tau / (1.0 + iw * m.tau))
        .sum();
    Ok(s.kappa0 - iw * sum)
}

impl Compressibility for DiscreteRelaxationSet {
    fn kappa(&self, omega: f64) -> Result<Complex64> {
        kappa_discrete(self, omega)
    }

    fn static_compressibility(&self) -> f64 {
        self.kappa0
    }
}

fn require_ml_params(p: &FractionalZenerParams) -> Result<()> {
    p.require_finite_fields()?;
    p.require_equal_orders()?;
    if p.tau_sigma < p.tau_eps {
        return Err(Error::Domain(format!(
            "distribution requires tau_sigma >= tau_eps, got {} < {}",
            p.tau_sigma, p.tau_eps
        )));
    }
    Ok(())
}

/// Mittag-Leffler distribution of compressibility contributions for `alpha = beta`,
/// `(1/pi) kappa0 (tau_sigma^a - tau_eps^a) Omega^{a-1} sin(a pi) / ((tau_sigma Omega)^{2a} + 2 (tau_sigma Omega)^a cos(a pi) + 1)`.
///
/// For `alpha = 1` the distribution collapses to a single mechanism at
/// `Omega = 1/tau_sigma` (see [`ml_atom`]) and this density is zero.
pub fn kappa_ml_distribution(p: &FractionalZenerParams, omega: f64) -> Result<f64> {
    require_ml_params(p)?;
    require_positive("Omega", omega)?;
    let a = p.alpha;
    if a == 1.0 {
        return Ok(0.0);
    }
    let x = (p.tau_sigma * omega).powf(a);
    let amplitude = p.kappa0 * (p.tau_sigma.powf(a) - p.tau_eps.powf(a)) / PI;
    let den = x * x + 2.0 * x * cos_pi(a) + 1.0;
    Ok((amplitude * omega.powf(a - 1.0) * sin_pi(a) / den).max(0.0))
}

/// Location and strength `(Omega, kappa_nu)` of the single mechanism the
/// distribution reduces to when `alpha = beta = 1`.
pub fn ml_atom(p: &FractionalZenerParams) -> Option<(f64, f64)> {
    (p.alpha == 1.0 && p.beta == 1.0)
        .then(|| (1.0 / p.tau_sigma, p.kappa0 * (1.0 - p.tau_eps / p.tau_sigma)))
}

/// Distribution for `alpha <= beta`, which may be negative:
/// `kappa0/(pi Omega) [x^a sin(a pi) - y^b sin(b pi) - x^a y^b sin((b-a) pi)] / (x^{2a} + 2 x^a cos(a pi) + 1)`
/// with `x = tau_sigma Omega`, `y = tau_eps Omega`.
pub fn kappa_ml_prime(p: &FractionalZenerParams, omega: f64) -> Result<f64> {
    p.require_finite_fields()?;
    require_positive("Omega", omega)?;
    let (a, b) = (p.alpha, p.beta);
    if a > b {
        return Err(Error::Domain(format!(
            "distribution exists only for alpha <= beta, got alpha = {a}, beta = {b}"
        )));
    }
    let xa = (p.tau_sigma * omega).powf(a);
    let yb = (p.tau_eps * omega).powf(b);
    let num = xa * sin_pi(a) - yb * sin_pi(b) - xa * yb * sin_pi(b - a);
    let den = xa * xa + 2.0 * xa * cos_pi(a) + 1.0;
    Ok(p.kappa0 / (PI * omega) * num / den)
}

/// Distribution of the modified fractional Zener model. Not available: its
/// inverse transform is not known in closed form.
pub fn modified_zener_distribution(_p: &ModifiedZenerParams, _omega: f64) -> Result<f64> {
    Err(Error::Unavailable("relaxation distribution of the modified fractional Zener model"))
}

/// Sampled distribution, interpolated linearly in `ln Omega` and zero outside
/// the sampled range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TabulatedDistribution {
    kappa0: f64,
    omega: Vec<f64>,
    kappa_nu: Vec<f64>,
}

impl TabulatedDistribution {
    pub fn new(kappa0: f64, omega: Vec<f64>, kappa_nu: Vec<f64>) -> Result<Self> {
        require_positive("kappa0", kappa0)?;
        if omega.len() != kappa_nu.len() || omega.len() < 2 {
            return Err(Error::Domain("table needs at least two (Omega, kappa_nu) rows".into()));
        }
        for w in omega.windows(2) {
            if !(w[0] > 0.0 && w[1] > w[0]) {
                return Err(Error::Domain("table Omega must be positive and strictly increasing".into()));
            }
        }
        for &k in &kappa_nu {
            require_finite("kappa_nu", k)?;
            if k < 0.0 {
                return Err(Error::InvalidParameter {
                    name: "kappa_nu",
                    value: k,
                    reason: "tabulated weights must be non-negative",
                });
            }
        }
        Ok(Self {
            kappa0,
            omega,
            kappa_nu,
        })
    }

    /// Read a two-column `(Omega, kappa_nu)` text file.
    pub fn from_file(kappa0: f64, path: &Path) -> Result<Self> {
        let t = read_two_column(path)?;
        Self::new(kappa0, t.x, t.y).map_err(|e| Error::Table {
            path: path.to_path_buf(),
            line: 0,
            message: e.to_string(),
        })
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn kappa_nu(&self) -> &[f64] {
        &self.kappa_nu
    }

    pub fn range(&self) -> (f64, f64) {
        (self.omega[0], *self.omega.last().expect("non-empty table"))
    }

    pub fn value(&self, w: f64) -> f64 {
        let (lo, hi) = self.range();
        if !(w >= lo && w <= hi) {
            return 0.0;
        }
        let j = self.omega.partition_point(|&x| x <= w).clamp(1, self.omega.len() - 1);
        let (x0, x1) = (self.omega[j - 1].ln(), self.omega[j].ln());
        let t = (w.ln() - x0) / (x1 - x0);
        self.kappa_nu[j - 1] + t * (self.kappa_nu[j] - self.kappa_nu[j - 1])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionKind {
    /// `kappa_nuML` for `alpha = beta`.
    Ml(FractionalZenerParams),
    /// `kappa'_nuML` for `alpha <= beta`.
    MlPrime(FractionalZenerParams),
    Tabulated(TabulatedDistribution),
}

/// A relaxation distribution restricted to `[Omega_1, Omega_2]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuumDistribution {
    kind: DistributionKind,
    omega_bounds: (f64, f64),
}

impl ContinuumDistribution {
    pub fn new(kind: DistributionKind, omega_1: f64, omega_2: f64) -> Result<Self> {
        match &kind {
            DistributionKind::Ml(p) => {
                p.validate()?;
                require_ml_params(p)?;
            }
            DistributionKind::MlPrime(p) => {
                p.validate()?;
                if p.alpha > p.beta {
                    return Err(Error::Domain("kappa'_nuML requires alpha <= beta".into()));
                }
            }
            DistributionKind::Tabulated(_) => {}
        }
        if omega_1.is_nan() || omega_2.is_nan() || omega_1 < 0.0 || omega_1 >= omega_2 || omega_1.is_infinite() {
            return Err(Error::Domain(format!(
                "need 0 <= Omega_1 < Omega_2 <= inf, got [{omega_1}, {omega_2}]"
            )));
        }
        Ok(Self {
            kind,
            omega_bounds: (omega_1, omega_2),
        })
    }

    /// `kappa_nuML` over `[0, inf)`.
    pub fn ml(p: FractionalZenerParams) -> Result<Self> {
        Self::new(DistributionKind::Ml(p), 0.0, f64::INFINITY)
    }

    /// `kappa'_nuML` over `[0, inf)`.
    pub fn ml_prime(p: FractionalZenerParams) -> Result<Self> {
        Self::new(DistributionKind::MlPrime(p), 0.0, f64::INFINITY)
    }

    /// Tabulated distribution over its sampled range.
    pub fn tabulated(t: TabulatedDistribution) -> Result<Self> {
        let (lo, hi) = t.range();
        Self::new(DistributionKind::Tabulated(t), lo, hi)
    }

    /// The same distribution populated only on `[omega_1, omega_2]`, without
    /// renormalization.
    pub fn truncated(&self, omega_1: f64, omega_2: f64) -> Result<Self> {
        Self::new(self.kind.clone(), omega_1, omega_2)
    }

    pub fn kind(&self) -> &DistributionKind {
        &self.kind
    }

    pub fn omega_bounds(&self) -> (f64, f64) {
        self.omega_bounds
    }

    pub fn kappa0(&self) -> f64 {
        match &self.kind {
            DistributionKind::Ml(p) | DistributionKind::MlPrime(p) => p.kappa0,
            DistributionKind::Tabulated(t) => t.kappa0,
        }
    }

    /// `kappa_nu(Omega)` in closed form, zero outside the bounds.
    pub fn density(&self, omega: f64) -> Result<f64> {
        require_positive("Omega", omega)?;
        let (lo, hi) = self.omega_bounds;
        if omega < lo || omega > hi {
            return Ok(0.0);
        }
        match &self.kind {
            DistributionKind::Ml(p) => kappa_ml_distribution(p, omega),
            DistributionKind::MlPrime(p) => kappa_ml_prime(p, omega),
            DistributionKind::Tabulated(t) => Ok(t.value(omega)),
        }
    }

    /// The distribution as `sum w_j f_{a,b_j}(Omega, rate)`, or `None` for
    /// tabulated data and the `alpha = 1` atom.
    fn spectral_terms(&self) -> Option<Vec<SpectralTerm>> {
        let p = match &self.kind {
            DistributionKind::Ml(p) | DistributionKind::MlPrime(p) => p,
            DistributionKind::Tabulated(_) => return None,
        };
        if p.alpha == 1.0 {
            return None;
        }
        let rate = p.tau_sigma.powf(-p.alpha);
        let mut terms = vec![SpectralTerm {
            weight: p.kappa0,
            a: p.alpha,
            b: 1.0,
            rate,
        }];
        let second = SpectralTerm {
            weight: -p.kappa0 * p.tau_eps.powf(p.beta) / p.tau_sigma.powf(p.alpha),
            a: p.alpha,
            b: p.alpha - p.beta + 1.0,
            rate,
        };
        if second.b == 1.0 {
            terms[0].weight += second.weight;
        } else {
            terms.push(second);
        }
        Some(terms)
    }

    fn params(&self) -> Option<&FractionalZenerParams> {
        match &self.kind {
            DistributionKind::Ml(p) | DistributionKind::MlPrime(p) => Some(p),
            DistributionKind::Tabulated(_) => None,
        }
    }
}

impl Compressibility for ContinuumDistribution {
    fn kappa(&self, omega: f64) -> Result<Complex64> {
        kappa_continuum(self, omega)
    }

    fn static_compressibility(&self) -> f64 {
        self.kappa0()
    }
}

/// `weight * f_{a,b}(Omega, rate)`.
#[derive(Debug, Clone, Copy)]
struct SpectralTerm {
    weight: f64,
    a: f64,
    b: f64,
    rate: f64,
}

impl SpectralTerm {
    #[cfg(test)]
    fn value(&self, w: f64) -> f64 {
        self.weight * crate::mittag_leffler::spectral_density(self.a, self.b, self.rate, w)
    }

    /// Power series `sum c_n Omega^{p_n}` valid for `Omega^a < rate`.
    fn low_series(&self, n_max: usize) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..n_max).map(move |n| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let p = self.a * (n + 1) as f64 - self.b;
            let c = self.weight * sign * self.rate.powi(-(n as i32) - 1) * sin_pi(self.b - self.a * (n + 1) as f64) / PI;
            (c, p)
        })
    }

    /// Power series valid for `Omega^a > rate`.
    fn high_series(&self, n_max: usize) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..n_max).map(move |m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let p = -self.b - self.a * m as f64;
            let c = self.weight * sign * self.rate.powi(m as i32) * sin_pi(self.b + self.a * m as f64) / PI;
            (c, p)
        })
    }
}

/// `int_0^L Omega^p / (Omega + i w) dOmega` for `L << w`, `p > -1`.
fn low_power_tail(p: f64, w: f64, l: f64) -> Complex64 {
    let iw = Complex64::new(0.0, w);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut factor = 1.0 / iw;
    for k in 0..80 {
        let q = p + k as f64 + 1.0;
        let term = factor * l.powf(q) / q;
        sum += term;
        if term.norm() <= 1e-18 * sum.norm() {
            break;
        }
        factor *= -1.0 / iw;
    }
    sum
}

/// `int_H^inf Omega^p / (Omega + i w) dOmega` for `H >> w`, `p < 0`.
fn high_power_tail(p: f64, w: f64, h: f64) -> Complex64 {
    let miw = Complex64::new(0.0, -w);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut factor = Complex64::new(1.0, 0.0);
    for k in 0..80 {
        let q = k as f64 - p;
        let term = factor * h.powf(-q) / q;
        sum += term;
        if term.norm() <= 1e-18 * sum.norm() {
            break;
        }
        factor *= miw;
    }
    sum
}

/// Sums a power series `(c, p)` of a spectral term through `tail`, stopping
/// once the magnitudes have fallen far below the running total.
fn series_tail<I: Iterator<Item = (f64, f64)>>(series: I, tail: impl Fn(f64) -> Complex64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    let mut small = 0;
    for (c, p) in series {
        if c == 0.0 {
            continue;
        }
        let t = c * tail(p);
        total += t;
        if t.norm() <= 1e-18 * total.norm() {
            small += 1;
            if small >= 2 {
                break;
            }
        } else {
            small = 0;
        }
    }
    total
}

/// Accuracy settings of [`kappa_continuum_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumOptions {
    /// Relative tolerance certified separately on the real and imaginary parts.
    pub rel_tol: f64,
    /// Bisection budget per part.
    pub max_intervals: usize,
}

impl Default for ContinuumOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            max_intervals: 4000,
        }
    }
}

/// Result of a continuum quadrature with its certified error bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumEstimate {
    pub value: Complex64,
    pub error_re: f64,
    pub error_im: f64,
}

/// `kappa0 - i omega int_{Omega_1}^{Omega_2} kappa_nu(Omega) / (Omega + i omega) dOmega`
/// with the default tolerance.
pub fn kappa_continuum(d: &ContinuumDistribution, omega: f64) -> Result<Complex64> {
    kappa_continuum_with(d, omega, &ContinuumOptions::default()).map(|e| e.value)
}

/// As [`kappa_continuum`], also returning the quadrature error bounds.
///
/// The integral runs in `u = ln Omega` with splits at `omega`, `1/tau_sigma`
/// and `1/tau_eps`. Unbounded ends of the closed-form distributions are
/// closed with their convergent power-series expansions. Tabulated data is
/// zero outside its table.
pub fn kappa_continuum_with(
    d: &ContinuumDistribution,
    omega: f64,
    opts: &ContinuumOptions,
) -> Result<ContinuumEstimate> {
    require_positive("omega", omega)?;
    let kappa0 = d.kappa0();
    let (b1, b2) = d.omega_bounds();
    let iw = Complex64::new(0.0, omega);
    let mut j = Complex64::new(0.0, 0.0);
    let mut interior = vec![omega.ln()];
    if let Some(p) = d.params() {
        interior.push(-p.tau_sigma.ln());
        interior.push(-p.tau_eps.ln());
    }

    // For the full-range alpha = beta distribution the total strength is
    // known, and Re kappa = kappa0 r + int kappa_nu Omega^2/(Omega^2 + omega^2)
    // avoids the cancellation in kappa0 + omega Im J above 1/tau_sigma.
    let mut strength_form: Option<f64> = None;
    let mut g_tail = 0.0;

    let (lo, hi) = match (&d.kind, d.spectral_terms()) {
        (DistributionKind::Tabulated(t), _) => {
            let (t_lo, t_hi) = t.range();
            interior.extend(t.omega.iter().map(|w| w.ln()));
            (b1.max(t_lo), b2.min(t_hi))
        }
        (_, None) => {
            // alpha = 1: a single Debye mechanism
            let p = d.params().expect("closed-form distribution");
            let (w0, strength) = (1.0 / p.tau_sigma, p.kappa0 * (1.0 - p.tau_eps / p.tau_sigma));
            if w0 >= b1 && w0 <= b2 {
                j += strength / (w0 + iw);
            }
            return Ok(ContinuumEstimate {
                value: kappa0 - iw * j,
                error_re: 0.0,
                error_im: 0.0,
            });
        }
        (kind, Some(terms)) => {
            let a = terms[0].a;
            let rate = terms[0].rate;
            let low_cut = (1e-3 * omega).min((1e-3 * rate).powf(1.0 / a));
            let high_cut = (1e3 * omega).max((1e3 * rate).powf(1.0 / a));
            let lo = if b1 == 0.0 { low_cut.min(b2) } else { b1 };
            let hi = if b2.is_infinite() { high_cut.max(lo) } else { b2 };
            let full = b1 == 0.0 && b2.is_infinite();
            if let (DistributionKind::Ml(p), true) = (kind, full) {
                if omega * p.tau_sigma > 1.0 {
                    strength_form = Some(kappa0 * p.stiffening_ratio());
                }
            }
            for t in &terms {
                if b1 == 0.0 {
                    let jt = series_tail(t.low_series(400), |p| low_power_tail(p, omega, lo));
                    let st = real_series_tail(t.low_series(400), |p| lo.powf(p + 1.0) / (p + 1.0));
                    g_tail += st + omega * jt.im;
                    j += jt;
                }
                if b2.is_infinite() {
                    let jt = series_tail(t.high_series(400), |p| high_power_tail(p, omega, hi));
                    let st = real_series_tail(t.high_series(400), |p| hi.powf(p + 1.0) / (-p - 1.0));
                    g_tail += st + omega * jt.im;
                    j += jt;
                }
            }
            (lo, hi)
        }
    };

    let (mut error_re, mut error_im) = (0.0, 0.0);
    let mut g_window = 0.0;
    if hi > lo {
        let pts = breakpoints(lo.ln(), hi.ln(), &interior);
        let weight = |u: f64| -> (f64, f64) {
            let w = u.exp();
            let k = d.density(w).unwrap_or(f64::NAN);
            (k * w, w)
        };
        let qopts = QuadOptions {
            rel_tol: 1e-2 * opts.rel_tol,
            abs_tol: 1e-300,
            max_intervals: opts.max_intervals,
        };
        // J = int kappa_nu (Omega - i omega) / (Omega^2 + omega^2) dOmega
        let re = integrate(
            |u| {
                let (kw, w) = weight(u);
                kw * w / (w * w + omega * omega)
            },
            &pts,
            &qopts,
        );
        let re_j = re.certified("continuum compressibility (imaginary part)", &qopts)?;
        error_im = omega * re.error;
        if strength_form.is_some() {
            let g = integrate(
                |u| {
                    let (kw, w) = weight(u);
                    kw * w * w / (w * w + omega * omega)
                },
                &pts,
                &qopts,
            );
            g_window = g.certified("continuum compressibility (real part)", &qopts)?;
            error_re = g.error;
            j += Complex64::new(re_j, 0.0);
        } else {
            let im = integrate(
                |u| {
                    let (kw, w) = weight(u);
                    -kw * omega / (w * w + omega * omega)
                },
                &pts,
                &qopts,
            );
            let im_j = im.certified("continuum compressibility (real part)", &qopts)?;
            error_re = omega * im.error;
            j += Complex64::new(re_j, im_j);
        }
    }
    let mut value = kappa0 - iw * j;
    if let Some(high_limit) = strength_form {
        value.re = high_limit + g_window + g_tail;
    }
    let tol_re = opts.rel_tol * value.re.abs();
    let tol_im = opts.rel_tol * value.im.abs();
    if error_re > tol_re && error_re > 1e-15 * kappa0 {
        return Err(Error::Quadrature {
            context: "continuum compressibility (real part)",
            achieved: error_re,
            requested: tol_re,
        });
    }
    if error_im > tol_im && error_im > 1e-15 * kappa0 {
        return Err(Error::Quadrature {
            context: "continuum compressibility (imaginary part)",
            achieved: error_im,
            requested: tol_im,
        });
    }
    Ok(ContinuumEstimate {
        value,
        error_re,
        error_im,
    })
}

fn real_series_tail<I: Iterator<Item = (f64, f64)>>(series: I, tail: impl Fn(f64) -> f64) -> f64 {
    series_tail(series, |p| Complex64::new(tail(p), 0.0)).re
}

/// Default regime windows for the distribution, in `Omega tau_sigma`.
pub const DISTRIBUTION_WINDOWS: RegimeWindows = RegimeWindows {
    low: Window::new(1e-6, 1e-4),
    mid: Window::new(0.316_227_766_016_837_94, 3.162_277_660_168_379_5),
    high: Window::new(1e4, 1e6),
};

/// Power-law regimes of `kappa_nuML`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistributionRegimes {
    pub low: RegimeSlope,
    pub mid: RegimeSlope,
    pub high: RegimeSlope,
    /// Crossover `Omega = 1/tau_sigma` (rad/s).
    pub omega_sigma: f64,
    /// Upper crossover `Omega = 1/tau_eps`, reported when `tau_eps << tau_sigma`.
    pub omega_eps: Option<f64>,
}

/// Exponents `alpha - 1`, `-1`, `-alpha - 1` and least-squares slopes over
/// [`DISTRIBUTION_WINDOWS`].
pub fn distribution_regimes(p: &FractionalZenerParams) -> Result<DistributionRegimes> {
    distribution_regimes_in(p, &DISTRIBUTION_WINDOWS)
}

pub fn distribution_regimes_in(
    p: &FractionalZenerParams,
    windows: &RegimeWindows,
) -> Result<DistributionRegimes> {
    require_ml_params(p)?;
    let a = p.alpha;
    let f = |w: f64| kappa_ml_distribution(p, w);
    let slope = |analytic: f64, window: Window| -> Result<RegimeSlope> {
        Ok(RegimeSlope {
            analytic,
            fitted: fit_loglog(f, window, p.tau_sigma)?,
            window,
        })
    };
    Ok(DistributionRegimes {
        low: slope(a - 1.0, windows.low)?,
        mid: slope(-1.0, windows.mid)?,
        high: slope(-a - 1.0, windows.high)?,
        omega_sigma: 1.0 / p.tau_sigma,
        omega_eps: (p.tau_sigma / p.tau_eps >= 1e2).then(|| 1.0 / p.tau_eps),
    })
}

/// Relaxation-time spectrum `H(tau) = kappa_nuML(1/tau) / tau`.
///
/// Normalized so that `H(tau) d ln tau = kappa_nu(Omega) dOmega`; for
/// `alpha = beta` it is symmetric in `ln tau` about `tau_sigma`, where it
/// peaks at [`relaxation_time_spectrum_peak`].
pub fn relaxation_time_spectrum(p: &FractionalZenerParams, tau: f64) -> Result<f64> {
    require_positive("tau", tau)?;
    Ok(kappa_ml_distribution(p, 1.0 / tau)? / tau)
}

/// `H(tau_sigma) = kappa0 (1 - (tau_eps/tau_sigma)^alpha) tan(alpha pi / 2) / (2 pi)`.
pub fn relaxation_time_spectrum_peak(p: &FractionalZenerParams) -> Result<f64> {
    require_ml_params(p)?;
    Ok(p.kappa0 * (1.0 - p.stiffening_ratio()) * (p.alpha * PI / 2.0).tan() / (2.0 * PI))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constitutive::kappa_zener;

    fn fig2() -> FractionalZenerParams {
        FractionalZenerParams::symmetric(1.0, 1.0, 1e-3, 0.5, 1.0).unwrap()
    }

    #[test]
    fn discrete_single_mechanism() {
        let s = DiscreteRelaxationSet::new(1.0, vec![Mechanism { tau: 2.0, kappa: 0.3 }]).unwrap();
        let k = kappa_discrete(&s, 0.5).unwrap();
        let expected = 1.0 - 0.3 * Complex64::new(1.0, 1.0) / 2.0;
        assert!((k - expected).norm() < 1e-15);
        let z = s.matched_zener(1.0).unwrap();
        for w in [1e-2, 0.5, 3.0, 1e3] {
            assert!((kappa_discrete(&s, w).unwrap() - kappa_zener(&z, w).unwrap()).norm() < 1e-14);
        }
        let empty = DiscreteRelaxationSet::new(2.0, vec![]).unwrap();
        assert_eq!(kappa_discrete(&empty, 7.0).unwrap(), Complex64::new(2.0, 0.0));
        assert!(DiscreteRelaxationSet::new(1.0, vec![Mechanism { tau: 1.0, kappa: -1.0 }]).is_err());
    }

    #[test]
    fn ml_reference_values() {
        let v = kappa_ml_distribution(&fig2(), 1.0).unwrap();
        assert!((v - 0.154122021881446632265261).abs() < 1e-16);
        let p = FractionalZenerParams::new(1.0, 1.0, 0.1, 0.4, 0.8, 1.0).unwrap();
        let v = kappa_ml_prime(&p, 1.0).unwrap();
        assert!((v - 0.0859798227485962511565165).abs() < 1e-16);
        let q = FractionalZenerParams::symmetric(1.0, 2.0, 1e-3, 0.6, 1.0).unwrap();
        let h = relaxation_time_spectrum(&q, 0.2).unwrap();
        assert!((h - 0.08288501874959064331091552).abs() < 1e-16);
    }

    #[test]
    fn spectral_decomposition_matches_closed_form() {
        let p = FractionalZenerParams::new(1.3, 1.7, 0.02, 0.35, 0.75, 1.0).unwrap();
        let d = ContinuumDistribution::ml_prime(p).unwrap();
        let terms = d.spectral_terms().unwrap();
        for w in [1e-4, 0.1, 1.0, 30.0, 1e5] {
            let direct = kappa_ml_prime(&p, w).unwrap();
            let split: f64 = terms.iter().map(|t| t.value(w)).sum();
            assert!((direct - split).abs() <= 1e-13 * direct.abs(), "{w}");
        }
    }

    #[test]
    fn domain_errors() {
        let unequal = FractionalZenerParams::new(1.0, 1.0, 0.1, 0.4, 0.8, 1.0).unwrap();
        assert!(kappa_ml_distribution(&unequal, 1.0).is_err());
        let swapped = FractionalZenerParams::new(1.0, 1.0, 0.1, 0.8, 0.4, 1.0).unwrap();
        assert!(kappa_ml_prime(&swapped, 1.0).is_err());
        let inverted = FractionalZenerParams::symmetric(1.0, 1e-3, 1.0, 0.5, 1.0).unwrap();
        assert!(kappa_ml_distribution(&inverted, 1.0).is_err());
        assert!(ContinuumDistribution::ml(fig2()).unwrap().truncated(2.0, 1.0).is_err());
    }

    #[test]
    fn equal_times_give_zero_distribution() {
        let p = FractionalZenerParams::symmetric(1.0, 1.0, 1.0, 0.5, 1.0).unwrap();
        assert_eq!(kappa_ml_distribution(&p, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn continuum_matches_zener_at_spot_frequencies() {
        let p = FractionalZenerParams::symmetric(1.0, 1.0, 1e-3, 0.5, 1.0).unwrap();
        let d = ContinuumDistribution::ml(p).unwrap();
        for w in [1e-3, 1.0, 1e3] {
            let a = kappa_continuum(&d, w).unwrap();
            let b = kappa_zener(&p, w).unwrap();
            assert!((a - b).norm() / b.norm() < 1e-9, "{w}: {a} vs {b}");
        }
    }

    #[test]
    fn continuum_alpha_one_is_debye() {
        let p = FractionalZenerParams::symmetric(1.0, 1.0, 0.25, 1.0, 1.0).unwrap();
        let d = ContinuumDistribution::ml(p).unwrap();
        for w in [0.1, 1.0, 10.0] {
            let a = kappa_continuum(&d, w).unwrap();
            assert!((a - kappa_zener(&p, w).unwrap()).norm() < 1e-14);
        }
    }

    #[test]
    fn tabulated_interpolation_and_zero_table() {
        let t = TabulatedDistribution::new(1.0, vec![1.0, 10.0, 100.0], vec![0.0, 1.0, 0.0]).unwrap();
        assert!((t.value(10f64.sqrt()) - 0.5).abs() < 1e-15);
        assert_eq!(t.value(0.5), 0.0);
        let zero = TabulatedDistribution::new(2.0, vec![1.0, 2.0], vec![0.0, 0.0]).unwrap();
        let d = ContinuumDistribution::tabulated(zero).unwrap();
        assert_eq!(kappa_continuum(&d, 3.0).unwrap(), Complex64::new(2.0, 0.0));
        assert!(TabulatedDistribution::new(1.0, vec![1.0, 2.0], vec![0.0, -1.0]).is_err());
    }

    #[test]
    fn spectrum_peak_and_hooks() {
        let p = fig2();
        let peak = relaxation_time_spectrum_peak(&p).unwrap();
        assert!((relaxation_time_spectrum(&p, p.tau_sigma).unwrap() - peak).abs() < 1e-16);
        let m = ModifiedZenerParams::new(p).unwrap();
        assert!(matches!(modified_zener_distribution(&m, 1.0), Err(Error::Unavailable(_))));
    }
}
