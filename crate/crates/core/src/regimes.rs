//! Log-log slope fitting over frequency windows.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::special::{log_space, ols_slope};

/// Closed frequency window in units normalized by `tau_sigma` (`omega tau_sigma`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    /// One decade centered (geometrically) on `center`.
    pub fn decade_around(center: f64) -> Self {
        let half = 10f64.sqrt();
        Self::new(center / half, center * half)
    }
}

/// Windows for the low, intermediate and high power-law regimes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeWindows {
    pub low: Window,
    pub mid: Window,
    pub high: Window,
}

/// Analytic and fitted exponents of one regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeSlope {
    pub analytic: f64,
    /// Least-squares slope over the window; `None` when it could not be fitted.
    pub fitted: Option<f64>,
    pub window: Window,
}

impl RegimeSlope {
    pub fn deviation(&self) -> Option<f64> {
        self.fitted.map(|f| (f - self.analytic).abs())
    }
}

/// Samples per decade used for slope fits.
pub const FIT_POINTS_PER_DECADE: usize = 20;

/// OLS slope of `ln f` against `ln x` over `window` scaled by `1/scale`.
/// Returns `None` if any sample is non-positive.
pub fn fit_loglog<F>(f: F, window: Window, scale: f64) -> Result<Option<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    let decades = (window.hi / window.lo).log10();
    let n = ((decades * FIT_POINTS_PER_DECADE as f64).ceil() as usize + 1).max(3);
    let xs = log_space(window.lo / scale, window.hi / scale, n);
    let mut lx = Vec::with_capacity(n);
    let mut ly = Vec::with_capacity(n);
    for x in xs {
        let y = f(x)?;
        if !(y > 0.0 && y.is_finite()) {
            return Ok(None);
        }
        lx.push(x.ln());
        ly.push(y.ln());
    }
    Ok(Some(ols_slope(&lx, &ly)))
}
