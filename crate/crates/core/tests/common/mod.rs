#![allow(dead_code)]

use fracwave::constitutive::{Constraint, FractionalZenerParams};
use Constraint::*;

pub fn params(kappa0: f64, tau_sigma: f64, tau_eps: f64, alpha: f64, beta: f64) -> FractionalZenerParams {
    FractionalZenerParams {
        kappa0,
        tau_sigma,
        tau_eps,
        alpha,
        beta,
        rho0: 1.0,
    }
}

pub fn fig2() -> FractionalZenerParams {
    params(1.0, 1.0, 1e-3, 0.5, 0.5)
}

/// Parameter sets with the constraints each one violates, derived by hand
/// from the constraint definitions.
pub fn admissibility_truth_table() -> Vec<(&'static str, FractionalZenerParams, Vec<Constraint>)> {
    vec![
        ("admissible", params(1.0, 1.0, 1e-3, 0.5, 0.5), vec![]),
        ("equal times", params(1.0, 1e-3, 1e-3, 0.7, 0.7), vec![]),
        ("alpha != beta", params(1.0, 1.0, 1e-3, 0.4, 0.6), vec![AlphaEqualsBeta]),
        ("tau_eps > tau_sigma", params(1.0, 1e-3, 1.0, 0.5, 0.5), vec![TauSigmaDominates]),
        ("tau_eps = 0", params(1.0, 1.0, 0.0, 0.5, 0.5), vec![TauEpsPositive]),
        ("negative kappa0", params(-1.0, 1.0, 1e-3, 0.5, 0.5), vec![E0NonNegative, E0TauSigmaPositive]),
        ("infinite kappa0", params(f64::INFINITY, 1.0, 1e-3, 0.5, 0.5), vec![E0TauSigmaPositive]),
        ("tau_sigma = 0", params(1.0, 0.0, 1e-3, 0.5, 0.5), vec![E0TauSigmaPositive, TauSigmaDominates]),
        (
            "tau_eps > tau_sigma, alpha != beta",
            params(1.0, 1.0, 2.0, 0.5, 0.6),
            vec![TauSigmaDominates, AlphaEqualsBeta],
        ),
        // tau_eps > tau_sigma, yet tau_sigma^alpha >= tau_eps^beta
        ("powers dominate", params(1.0, 0.5, 0.6, 0.2, 0.9), vec![AlphaEqualsBeta]),
        (
            "negative kappa0, tau_eps = 0, alpha != beta",
            params(-1.0, 1.0, 0.0, 0.3, 0.8),
            vec![E0NonNegative, E0TauSigmaPositive, TauEpsPositive, AlphaEqualsBeta],
        ),
        ("NaN kappa0", params(f64::NAN, 1.0, 1e-3, 0.5, 0.5), vec![E0NonNegative, E0TauSigmaPositive]),
    ]
}

/// Ten `alpha < beta` pairs for the negativity study.
pub const UNEQUAL_ORDERS: [(f64, f64); 10] = [
    (0.1, 0.3),
    (0.2, 0.5),
    (0.3, 0.4),
    (0.3, 0.9),
    (0.4, 0.6),
    (0.5, 0.7),
    (0.5, 1.0),
    (0.6, 0.8),
    (0.7, 0.9),
    (0.8, 0.95),
];

pub const EQUAL_ORDERS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
pub const RATIOS: [f64; 3] = [10.0, 1e3, 1e5];
