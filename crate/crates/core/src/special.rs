//! Small special-function helpers shared by the evaluators.

use std::f64::consts::PI;

/// `sin(pi x)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    if r == 0.5 {
        return 1.0;
    }
    if r == 1.5 {
        return -1.0;
    }
    // reduce to [-1/2, 1/2] before scaling by pi
    let (s, y) = if r < 0.5 {
        (1.0, r)
    } else if r < 1.5 {
        (-1.0, r - 1.0)
    } else {
        (1.0, r - 2.0)
    };
    s * (PI * y).sin()
}

/// `cos(pi x)` with exact zeros at the half-integers.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `ln |Gamma(x)|` together with the sign of `Gamma(x)`.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    let (v, s) = libm::lgamma_r(x);
    (v, if s < 0 { -1.0 } else { 1.0 })
}

/// Whether `x` is a pole of the Gamma function.
pub fn is_gamma_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// `1 / Gamma(x)`, zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    if is_gamma_pole(x) {
        return 0.0;
    }
    if x < 171.0 && x > -170.0 {
        1.0 / gamma(x)
    } else {
        let (lg, s) = ln_gamma_signed(x);
        s * (-lg).exp()
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Ordinary least-squares slope of `ys` against `xs`.
pub fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

/// `n` points log-uniformly spaced on `[lo, hi]`, endpoints included.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64)
            }
        })
        .collect()
}
