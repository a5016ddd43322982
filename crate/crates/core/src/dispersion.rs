//! Complex wavenumber, attenuation and phase speed from a compressibility.
//!
//! The dispersion relation is `k^2 = omega^2 rho0 kappa(omega)`; the root with
//! `Re k > 0` is taken, so `alpha_k = -Im k >= 0` whenever `Im kappa <= 0`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::constitutive::{kappa_zener, Compressibility, FractionalZenerParams};
use crate::error::{require_positive, Error, Result};
use crate::regimes::{fit_loglog, RegimeSlope, RegimeWindows, Window};

/// `tau_sigma/tau_eps` below which no intermediate attenuation regime is fitted.
pub const MIN_INTERMEDIATE_RATIO: f64 = 1e2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DispersionResult {
    /// Angular frequencies (rad/s).
    pub omega: Vec<f64>,
    /// Wavenumber (1/m).
    pub k: Vec<Complex64>,
    /// Attenuation `-Im k` (Np/m).
    pub alpha_k: Vec<f64>,
    /// Phase speed `omega / Re k` (m/s).
    pub c_p: Vec<f64>,
}

impl DispersionResult {
    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// Decades spanned by the frequency grid.
    pub fn decades(&self) -> f64 {
        match (self.omega.first(), self.omega.last()) {
            (Some(lo), Some(hi)) => (hi / lo).log10(),
            _ => 0.0,
        }
    }
}

/// `omega sqrt(rho0 kappa)` on the branch with `Re k > 0`.
pub fn wavenumber(kappa: Complex64, rho0: f64, omega: f64) -> Result<Complex64> {
    require_positive("omega", omega)?;
    require_positive("rho0", rho0)?;
    if !(kappa.re.is_finite() && kappa.im.is_finite()) {
        return Err(Error::NonFinite("kappa"));
    }
    if kappa.re <= 0.0 {
        return Err(Error::Domain(format!(
            "compressibility with Re kappa = {} <= 0 has no propagating wave",
            kappa.re
        )));
    }
    Ok(omega * (rho0 * kappa).sqrt())
}

fn check_grid(grid: &[f64]) -> Result<()> {
    for (i, &w) in grid.iter().enumerate() {
        require_positive("omega", w).map_err(|e| e.at_sample(i, w))?;
        if i > 0 && w <= grid[i - 1] {
            return Err(Error::Domain(format!(
                "frequency grid must be strictly increasing (index {i}, omega = {w})"
            )));
        }
    }
    Ok(())
}

/// Wavenumber, attenuation and phase speed of any medium over a sorted grid.
/// Samples are evaluated in parallel; results keep grid order.
pub fn dispersion_sweep<M: Compressibility + ?Sized>(
    medium: &M,
    rho0: f64,
    grid: &[f64],
) -> Result<DispersionResult> {
    check_grid(grid)?;
    require_positive("rho0", rho0)?;
    let k: Vec<Complex64> = grid
        .par_iter()
        .enumerate()
        .map(|(i, &w)| {
            medium
                .kappa(w)
                .and_then(|kappa| wavenumber(kappa, rho0, w))
                .map_err(|e| e.at_sample(i, w))
        })
        .collect::<Result<_>>()?;
    let alpha_k = k.iter().map(|k| -k.im).collect();
    let c_p = grid.iter().zip(&k).map(|(w, k)| w / k.re).collect();
    Ok(DispersionResult {
        omega: grid.to_vec(),
        k,
        alpha_k,
        c_p,
    })
}

/// [`dispersion_sweep`] over the fractional Zener compressibility.
pub fn attenuation_and_speed(p: &FractionalZenerParams, grid: &[f64]) -> Result<DispersionResult> {
    p.validate()?;
    dispersion_sweep(p, p.rho0, grid)
}

/// Attenuation of the fractional Zener model at a single frequency.
pub fn zener_attenuation(p: &FractionalZenerParams, omega: f64) -> Result<f64> {
    Ok(-wavenumber(kappa_zener(p, omega)?, p.rho0, omega)?.im)
}

/// Phase speed of the fractional Zener model at a single frequency.
pub fn zener_phase_speed(p: &FractionalZenerParams, omega: f64) -> Result<f64> {
    Ok(omega / wavenumber(kappa_zener(p, omega)?, p.rho0, omega)?.re)
}

/// Default attenuation windows in `omega tau_sigma` for `ratio = tau_sigma/tau_eps`:
/// `[1e-6, 1e-4]`, the decade centered on `sqrt(ratio)` (geometrically midway
/// between the crossovers `omega tau_sigma = 1` and `omega tau_eps = 1`), and
/// `[1e2, 1e4] ratio`.
pub fn attenuation_windows(ratio: f64) -> RegimeWindows {
    RegimeWindows {
        low: Window::new(1e-6, 1e-4),
        mid: Window::decade_around(ratio.sqrt()),
        high: Window::new(1e2 * ratio, 1e4 * ratio),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttenuationRegimes {
    /// Exponent `1 + alpha`.
    pub low: RegimeSlope,
    /// Exponent `1 - alpha/2`; `None` when `tau_sigma/tau_eps` is below
    /// [`MIN_INTERMEDIATE_RATIO`].
    pub mid: Option<RegimeSlope>,
    /// Exponent `1 - alpha`.
    pub high: RegimeSlope,
    pub note: Option<String>,
}

/// Analytic and fitted attenuation exponents over [`attenuation_windows`].
pub fn attenuation_regimes(p: &FractionalZenerParams) -> Result<AttenuationRegimes> {
    attenuation_regimes_in(p, &attenuation_windows(p.tau_sigma / p.tau_eps))
}

pub fn attenuation_regimes_in(
    p: &FractionalZenerParams,
    windows: &RegimeWindows,
) -> Result<AttenuationRegimes> {
    p.validate()?;
    p.require_equal_orders()?;
    let a = p.alpha;
    let f = |w: f64| zener_attenuation(p, w);
    let slope = |analytic: f64, window: Window| -> Result<RegimeSlope> {
        Ok(RegimeSlope {
            analytic,
            fitted: fit_loglog(f, window, p.tau_sigma)?,
            window,
        })
    };
    let ratio = p.tau_sigma / p.tau_eps;
    let (mid, note) = if ratio >= MIN_INTERMEDIATE_RATIO {
        (Some(slope(1.0 - a / 2.0, windows.mid)?), None)
    } else {
        (
            None,
            Some(format!(
                "no intermediate regime: tau_sigma/tau_eps = {ratio:.3e} < {MIN_INTERMEDIATE_RATIO:.0e}"
            )),
        )
    };
    Ok(AttenuationRegimes {
        low: slope(1.0 + a, windows.low)?,
        mid,
        high: slope(1.0 - a, windows.high)?,
        note,
    })
}
