//! Numerical checks of causality and admissibility: Kramers-Kronig
//! consistency of a sampled dispersion curve, bounded high-frequency phase
//! speed, sub-linear attenuation growth and the sign of relaxation
//! distributions.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constitutive::{kappa_kelvin_voigt, FractionalZenerParams};
use crate::dispersion::{attenuation_and_speed, wavenumber, zener_phase_speed, DispersionResult};
use crate::error::{require_positive, Error, Result};
use crate::quadrature::{integrate, QuadOptions};
use crate::relaxation_spectrum::{ContinuumDistribution, DistributionKind};
use crate::special::{log_space, ols_slope};

/// Subtraction order of the dispersion relation used by [`kramers_kronig_check`].
pub const KK_SUBTRACTIONS: u32 = 1;

/// Accepted relative error of the reconstructed phase speed.
pub const KK_TOLERANCE: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CausalityReport {
    pub kk_max_rel_error: f64,
    pub kk_reference_omega: f64,
    pub kk_subtractions: u32,
    pub phase_speed_bounded: bool,
    pub c_infinity: f64,
    pub hf_attenuation_exponent: f64,
    pub distribution_nonnegative: bool,
    pub first_negative_omega: Option<f64>,
}

impl CausalityReport {
    pub fn passes(&self) -> bool {
        self.kk_max_rel_error < KK_TOLERANCE
            && self.phase_speed_bounded
            && self.hf_attenuation_exponent < 1.0
            && self.distribution_nonnegative
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KramersKronig {
    /// Largest relative deviation of the reconstructed `c_p` over the central
    /// four decades.
    pub max_rel_error: f64,
    pub reference_omega: f64,
    /// Spread between two tail extrapolations, as a relative speed error.
    pub tail_uncertainty: f64,
    /// Log-log slope of `alpha_k` over the top decade.
    pub hf_attenuation_exponent: f64,
    /// Whether `c_p` levels off at the top of the band.
    pub phase_speed_bounded: bool,
}

/// Attenuation interpolated from samples and continued outside the band by
/// power laws fitted to the end samples.
struct AttenuationModel<'a> {
    ln_w: Vec<f64>,
    values: &'a [f64],
    ln_values: Option<Vec<f64>>,
    low: (f64, f64, f64),
    high: (f64, f64, f64),
}

impl<'a> AttenuationModel<'a> {
    fn new(d: &'a DispersionResult, tail_decades: f64) -> Self {
        let ln_w: Vec<f64> = d.omega.iter().map(|w| w.ln()).collect();
        let positive = d.alpha_k.iter().all(|a| *a > 0.0);
        let ln_values = positive.then(|| d.alpha_k.iter().map(|a| a.ln()).collect::<Vec<_>>());
        let fit = |from_top: bool| -> (f64, f64, f64) {
            let n = ln_w.len();
            let span = tail_decades * std::f64::consts::LN_10;
            let idx: Vec<usize> = if from_top {
                (0..n).filter(|&i| ln_w[i] >= ln_w[n - 1] - span).collect()
            } else {
                (0..n).filter(|&i| ln_w[i] <= ln_w[0] + span).collect()
            };
            let end = if from_top { n - 1 } else { 0 };
            let exponent = match &ln_values {
                Some(lv) if idx.len() >= 2 => {
                    let xs: Vec<f64> = idx.iter().map(|&i| ln_w[i]).collect();
                    let ys: Vec<f64> = idx.iter().map(|&i| lv[i]).collect();
                    ols_slope(&xs, &ys)
                }
                _ => 0.0,
            };
            (ln_w[end], d.alpha_k[end], exponent)
        };
        let low = fit(false);
        let high = fit(true);
        Self {
            ln_w,
            values: &d.alpha_k,
            ln_values,
            low,
            high,
        }
    }

    fn at(&self, w: f64) -> f64 {
        let u = w.ln();
        let n = self.ln_w.len();
        if u <= self.ln_w[0] {
            let (u0, a0, p) = self.low;
            return a0 * (p * (u - u0)).exp();
        }
        if u >= self.ln_w[n - 1] {
            let (u1, a1, p) = self.high;
            return a1 * (p * (u - u1)).exp();
        }
        let j = self.ln_w.partition_point(|&x| x <= u).clamp(1, n - 1);
        let t = (u - self.ln_w[j - 1]) / (self.ln_w[j] - self.ln_w[j - 1]);
        match &self.ln_values {
            Some(lv) => (lv[j - 1] + t * (lv[j] - lv[j - 1])).exp(),
            None => self.values[j - 1] + t * (self.values[j] - self.values[j - 1]),
        }
    }

    /// `I(w) = int_0^inf (alpha(w') - alpha(w)) / (w'^2 - w^2) dw'` with
    /// `w' = w e^{+-s}` folded onto `s > 0`.
    fn dispersion_integral(&self, w: f64) -> Result<f64> {
        let aw = self.at(w);
        let p = self.high.2;
        if p >= 1.0 {
            return Err(Error::Domain(format!(
                "attenuation grows like omega^{p:.3} at the top of the band; the once-subtracted relation diverges"
            )));
        }
        let s_top = (self.ln_w[self.ln_w.len() - 1] - w.ln()).max(0.0);
        let s_max = s_top + 40.0 / (1.0 - p).max(0.05);
        let pair = |s: f64| -> f64 {
            if s == 0.0 {
                return 0.0;
            }
            let e = s.exp();
            let up = (self.at(w * e) - aw) * e / (e * e - 1.0);
            let ie = 1.0 / e;
            let down = (self.at(w * ie) - aw) * ie / (ie * ie - 1.0);
            (up + down) / w
        };
        let mut pts = vec![0.0];
        let mut s = 0.5;
        while s < s_max {
            pts.push(s);
            s *= 2.0;
        }
        pts.push(s_max);
        let opts = QuadOptions::rel(1e-10).with_abs(1e-300);
        integrate(pair, &pts, &opts).certified("Kramers-Kronig dispersion integral", &opts)
    }
}

/// Reconstruct `1/c_p(w) - 1/c_p(w_ref) = (2/pi) [I(w) - I(w_ref)]` from the
/// sampled attenuation (once-subtracted dispersion relation) and compare with
/// the sampled `c_p` over the central four decades of the band.
pub fn kramers_kronig_check(d: &DispersionResult, reference_omega: f64) -> Result<KramersKronig> {
    require_positive("reference_omega", reference_omega)?;
    if d.len() < 8 || d.decades() < 8.0 {
        return Err(Error::Domain(format!(
            "Kramers-Kronig check needs at least 8 decades of samples, got {:.2}",
            d.decades()
        )));
    }
    let (lo, hi) = (d.omega[0], d.omega[d.len() - 1]);
    if !(reference_omega > lo && reference_omega < hi) {
        return Err(Error::Domain("reference frequency must lie inside the band".into()));
    }
    let center = (lo * hi).sqrt();
    let c_ref = interpolate_speed(d, reference_omega);

    let reconstruct = |model: &AttenuationModel| -> Result<Vec<(f64, f64)>> {
        let i_ref = model.dispersion_integral(reference_omega)?;
        let mut out = Vec::new();
        for (i, &w) in d.omega.iter().enumerate() {
            if w < center * 1e-2 || w > center * 1e2 {
                continue;
            }
            let inv = 1.0 / c_ref + 2.0 / PI * (model.dispersion_integral(w)? - i_ref);
            out.push((1.0 / inv, d.c_p[i]));
        }
        Ok(out)
    };
    let primary = reconstruct(&AttenuationModel::new(d, 0.5))?;
    let alternate = reconstruct(&AttenuationModel::new(d, 1.0))?;
    let max_rel_error = primary
        .iter()
        .map(|(rec, direct)| ((rec - direct) / direct).abs())
        .fold(0.0, f64::max);
    let tail_uncertainty = primary
        .iter()
        .zip(&alternate)
        .map(|((a, direct), (b, _))| ((a - b) / direct).abs())
        .fold(0.0, f64::max);
    if tail_uncertainty > KK_TOLERANCE {
        return Err(Error::Truncation {
            bound: tail_uncertainty,
            tolerance: KK_TOLERANCE,
        });
    }
    Ok(KramersKronig {
        max_rel_error,
        reference_omega,
        tail_uncertainty,
        hf_attenuation_exponent: top_decade_slope(d, &d.alpha_k),
        phase_speed_bounded: speed_levels_off(d),
    })
}

fn interpolate_speed(d: &DispersionResult, w: f64) -> f64 {
    let j = d.omega.partition_point(|&x| x <= w).clamp(1, d.len() - 1);
    let (u0, u1) = (d.omega[j - 1].ln(), d.omega[j].ln());
    let t = (w.ln() - u0) / (u1 - u0);
    d.c_p[j - 1] + t * (d.c_p[j] - d.c_p[j - 1])
}

fn decade_slope(d: &DispersionResult, values: &[f64], lo: f64, hi: f64) -> f64 {
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (w, v) in d.omega.iter().zip(values) {
        if *w >= lo && *w <= hi && *v > 0.0 {
            xs.push(w.ln());
            ys.push(v.ln());
        }
    }
    if xs.len() < 2 {
        0.0
    } else {
        ols_slope(&xs, &ys)
    }
}

fn top_decade_slope(d: &DispersionResult, values: &[f64]) -> f64 {
    let hi = d.omega[d.len() - 1];
    decade_slope(d, values, hi / 10.0, hi)
}

/// The speed is taken as bounded when its log-slope over the top decade has
/// fallen to at most half of the steepest decade slope inside the band.
fn speed_levels_off(d: &DispersionResult) -> bool {
    let top = top_decade_slope(d, &d.c_p);
    let (lo, hi) = (d.omega[0], d.omega[d.len() - 1]);
    let mut steepest: f64 = 0.0;
    let mut a = lo;
    while a * 10.0 <= hi * (1.0 + 1e-12) {
        steepest = steepest.max(decade_slope(d, &d.c_p, a, a * 10.0));
        a *= 10f64.sqrt();
    }
    steepest <= 1e-12 || top <= 0.5 * steepest
}

/// Outcome of comparing the speed at a very high frequency with `c_inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiniteSpeed {
    pub bounded: bool,
    /// Analytic high-frequency limit (infinite for the Kelvin-Voigt model).
    pub c_infinity: f64,
    /// Phase speed at the probe frequency.
    pub c_probe: f64,
    pub probe_omega: f64,
}

/// Probe frequency `omega tau_eps = max(1e8, 10^{4/alpha})`, far enough for the
/// `(omega tau_eps)^{-alpha}` approach to the plateau to fall below 1e-4.
pub fn speed_probe_omega(p: &FractionalZenerParams) -> f64 {
    1e8f64.max(10f64.powf(4.0 / p.alpha)) / p.tau_eps
}

/// Compare the Zener phase speed at the probe frequency with
/// `c0 (tau_sigma/tau_eps)^{alpha/2}`; bounded when within 1e-3.
pub fn finite_speed_check(p: &FractionalZenerParams) -> Result<FiniteSpeed> {
    p.validate()?;
    let probe_omega = speed_probe_omega(p);
    let c_probe = zener_phase_speed(p, probe_omega)?;
    let c_infinity = p.c_infinity();
    Ok(FiniteSpeed {
        bounded: ((c_probe - c_infinity) / c_infinity).abs() <= 1e-3,
        c_infinity,
        c_probe,
        probe_omega,
    })
}

/// The same probe for the Kelvin-Voigt limit, whose speed grows without bound.
pub fn finite_speed_check_kelvin_voigt(p: &FractionalZenerParams) -> Result<FiniteSpeed> {
    p.validate()?;
    let probe_omega = speed_probe_omega(p);
    let k = wavenumber(kappa_kelvin_voigt(p, probe_omega)?, p.rho0, probe_omega)?;
    let c_probe = probe_omega / k.re;
    let c_finite = p.c_infinity();
    Ok(FiniteSpeed {
        bounded: ((c_probe - c_finite) / c_finite).abs() <= 1e-3,
        c_infinity: f64::INFINITY,
        c_probe,
        probe_omega,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonnegativityScan {
    pub nonnegative: bool,
    /// Smallest located `Omega` with a negative value.
    pub first_violation: Option<f64>,
    pub min_value: f64,
    pub min_omega: f64,
}

/// Sign scan of a distribution on `grid`, refined by bisection around sign
/// changes and by golden-section search around local minima.
pub fn nonnegativity_scan(dist: &ContinuumDistribution, grid: &[f64]) -> Result<NonnegativityScan> {
    if grid.is_empty() {
        return Err(Error::Domain("empty scan grid".into()));
    }
    let f = |w: f64| dist.density(w);
    let values: Vec<f64> = grid.iter().map(|&w| f(w)).collect::<Result<_>>()?;
    let mut min_value = f64::INFINITY;
    let mut min_omega = grid[0];
    let mut first_violation: Option<f64> = None;
    let mut note = |w: f64, v: f64, first: &mut Option<f64>| {
        if v < min_value {
            min_value = v;
            min_omega = w;
        }
        if v < 0.0 && first.map_or(true, |x| w < x) {
            *first = Some(w);
        }
    };
    for (&w, &v) in grid.iter().zip(&values) {
        note(w, v, &mut first_violation);
    }
    for i in 1..grid.len() {
        // refine the entry into a negative interval
        if values[i - 1] >= 0.0 && values[i] < 0.0 {
            let (mut a, mut b) = (grid[i - 1].ln(), grid[i].ln());
            for _ in 0..60 {
                let m = 0.5 * (a + b);
                if f(m.exp())? < 0.0 {
                    b = m;
                } else {
                    a = m;
                }
            }
            note(b.exp(), f(b.exp())?, &mut first_violation);
        }
        // dips that stay between grid points
        if i + 1 < grid.len() && values[i] <= values[i - 1] && values[i] <= values[i + 1] && values[i] >= 0.0 {
            let (w, v) = golden_min(&f, grid[i - 1].ln(), grid[i + 1].ln())?;
            note(w, v, &mut first_violation);
        }
    }
    Ok(NonnegativityScan {
        nonnegative: first_violation.is_none(),
        first_violation,
        min_value,
        min_omega,
    })
}

fn golden_min<F: Fn(f64) -> Result<f64>>(f: &F, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c.exp())?, f(d.exp())?);
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c.exp())?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d.exp())?;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x.exp(), f(x.exp())?))
}

/// Grid for sign scans: `decades` decades centered on `1/tau_sigma`.
pub fn scan_grid(p: &FractionalZenerParams, decades: f64, points_per_decade: usize) -> Vec<f64> {
    let half = 10f64.powf(decades / 2.0);
    let n = (decades * points_per_decade as f64).round() as usize + 1;
    log_space(1.0 / (p.tau_sigma * half), half / p.tau_sigma, n)
}

/// Full causality report for a fractional Zener parameter set over `grid`.
///
/// The distribution checked is `kappa_nuML` for `alpha = beta` and
/// `kappa'_nuML` for `alpha < beta`.
pub fn causality_report(p: &FractionalZenerParams, grid: &[f64]) -> Result<CausalityReport> {
    let d = attenuation_and_speed(p, grid)?;
    let reference = (grid[0] * grid[grid.len() - 1]).sqrt();
    let kk = kramers_kronig_check(&d, reference)?;
    let speed = finite_speed_check(p)?;
    let kind = if p.alpha == p.beta {
        DistributionKind::Ml(*p)
    } else {
        DistributionKind::MlPrime(*p)
    };
    let (nonnegative, first) = match ContinuumDistribution::new(kind, 0.0, f64::INFINITY) {
        Ok(dist) => {
            let scan = nonnegativity_scan(&dist, &scan_grid(p, 12.0, 20))?;
            (scan.nonnegative, scan.first_violation)
        }
        Err(_) => (false, None),
    };
    Ok(CausalityReport {
        kk_max_rel_error: kk.max_rel_error,
        kk_reference_omega: kk.reference_omega,
        kk_subtractions: KK_SUBTRACTIONS,
        phase_speed_bounded: speed.bounded && kk.phase_speed_bounded,
        c_infinity: speed.c_infinity,
        hf_attenuation_exponent: kk.hf_attenuation_exponent,
        distribution_nonnegative: nonnegative,
        first_negative_omega: first,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constitutive::ConstitutiveModel;
    use crate::dispersion::dispersion_sweep;

    fn fig2() -> FractionalZenerParams {
        FractionalZenerParams::symmetric(1.0, 1.0, 1e-3, 0.5, 1.0).unwrap()
    }

    #[test]
    fn zener_kramers_kronig() {
        let p = fig2();
        let grid = log_space(1e-5, 1e8, 261);
        let d = attenuation_and_speed(&p, &grid).unwrap();
        let kk = kramers_kronig_check(&d, (1e-5f64 * 1e8).sqrt()).unwrap();
        assert!(kk.max_rel_error < 1e-2, "{kk:?}");
        assert!(kk.phase_speed_bounded);
        assert!(kk.hf_attenuation_exponent < 1.0);
    }

    #[test]
    fn lossless_reconstructs_constant_speed() {
        let p = FractionalZenerParams::symmetric(1.0, 1e-3, 1e-3, 0.5, 1.0).unwrap();
        let d = attenuation_and_speed(&p, &log_space(1e-4, 1e6, 101)).unwrap();
        let kk = kramers_kronig_check(&d, 10.0).unwrap();
        assert!(kk.max_rel_error < 1e-14);
    }

    #[test]
    fn kelvin_voigt_speed_is_unbounded() {
        let p = fig2();
        let grid = log_space(1e-4, 1e8, 241);
        let d = dispersion_sweep(&ConstitutiveModel::KelvinVoigt(p), p.rho0, &grid).unwrap();
        let kk = kramers_kronig_check(&d, 100.0).unwrap();
        assert!(!kk.phase_speed_bounded);
        assert!(!finite_speed_check_kelvin_voigt(&p).unwrap().bounded);
    }

    #[test]
    fn finite_speed_values() {
        let s = finite_speed_check(&fig2()).unwrap();
        assert!(s.bounded);
        assert!((s.c_infinity - 5.62341325190349080394951).abs() < 1e-12);
        let same = FractionalZenerParams::symmetric(1.0, 1e-3, 1e-3, 0.5, 1.0).unwrap();
        let s = finite_speed_check(&same).unwrap();
        assert!(s.bounded && (s.c_infinity - same.c0()).abs() < 1e-15);
    }

    #[test]
    fn scan_finds_negative_prime_distribution() {
        let p = FractionalZenerParams::new(1.0, 1.0, 0.1, 0.4, 0.8, 1.0).unwrap();
        let d = ContinuumDistribution::ml_prime(p).unwrap();
        let s = nonnegativity_scan(&d, &log_space(1e-4, 1e4, 161)).unwrap();
        assert!(!s.nonnegative);
        let w = s.first_violation.unwrap();
        assert!(d.density(w).unwrap() < 0.0);
        assert!(d.density(w * 0.999).unwrap() >= 0.0 || w <= 1e-4);
    }

    #[test]
    fn report_for_fig2() {
        let r = causality_report(&fig2(), &log_space(1e-5, 1e8, 261)).unwrap();
        assert!(r.passes(), "{r:?}");
    }
}
