//! Fractional constitutive laws expressed as generalized compressibilities.
//!
//! All powers of `i omega` use the principal branch
//! `(i omega)^a = omega^a e^{i a pi / 2}`, so passivity reads `Im kappa <= 0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{require_finite, require_positive, Error, Result};
use crate::mittag_leffler::{ml_eval, MLParams};

/// Anything with a frequency-domain compressibility `kappa(omega)`.
pub trait Compressibility: Sync {
    fn kappa(&self, omega: f64) -> Result<Complex64>;

    /// `kappa(0+)`.
    fn static_compressibility(&self) -> f64;
}

/// `(i omega tau)^a` on the principal branch.
pub fn i_omega_pow(omega: f64, tau: f64, a: f64) -> Complex64 {
    Complex64::from_polar((omega * tau).powf(a), a * PI / 2.0)
}

/// Parameters of the five-parameter fractional Zener model plus density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionalZenerParams {
    /// Static compressibility `kappa0 = 1/E0` (1/Pa).
    pub kappa0: f64,
    /// Retardation time (s).
    pub tau_sigma: f64,
    /// Relaxation time (s).
    pub tau_eps: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Mass density (kg/m^3).
    pub rho0: f64,
}

impl FractionalZenerParams {
    /// Validated constructor. Admissibility is not required; see
    /// [`check_admissibility`].
    pub fn new(
        kappa0: f64,
        tau_sigma: f64,
        tau_eps: f64,
        alpha: f64,
        beta: f64,
        rho0: f64,
    ) -> Result<Self> {
        let p = Self {
            kappa0,
            tau_sigma,
            tau_eps,
            alpha,
            beta,
            rho0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Equal orders `alpha = beta`.
    pub fn symmetric(kappa0: f64, tau_sigma: f64, tau_eps: f64, alpha: f64, rho0: f64) -> Result<Self> {
        Self::new(kappa0, tau_sigma, tau_eps, alpha, alpha, rho0)
    }

    /// Parameters for a medium given by its low-frequency sound speed.
    pub fn from_sound_speed(c0: f64, rho0: f64, tau_sigma: f64, tau_eps: f64, alpha: f64, beta: f64) -> Result<Self> {
        require_positive("c0", c0)?;
        require_positive("rho0", rho0)?;
        Self::new(1.0 / (rho0 * c0 * c0), tau_sigma, tau_eps, alpha, beta, rho0)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("kappa0", self.kappa0)?;
        require_positive("rho0", self.rho0)?;
        require_positive("tau_sigma", self.tau_sigma)?;
        require_positive("tau_eps", self.tau_eps)?;
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            require_finite(name, v)?;
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "fractional order must lie in (0, 1]",
                });
            }
        }
        let c0 = self.c0();
        if !(c0.is_finite() && c0 > 0.0) {
            return Err(Error::Domain(format!("sound speed c0 = {c0} is not finite and positive")));
        }
        Ok(())
    }

    pub(crate) fn require_finite_fields(&self) -> Result<()> {
        require_finite("kappa0", self.kappa0)?;
        require_finite("tau_sigma", self.tau_sigma)?;
        require_finite("tau_eps", self.tau_eps)?;
        require_finite("alpha", self.alpha)?;
        require_finite("beta", self.beta)?;
        require_finite("rho0", self.rho0)
    }

    pub(crate) fn require_equal_orders(&self) -> Result<()> {
        if self.alpha != self.beta {
            return Err(Error::Domain(format!(
                "operation requires alpha = beta, got alpha = {}, beta = {}",
                self.alpha, self.beta
            )));
        }
        Ok(())
    }

    /// Low-frequency sound speed `(rho0 kappa0)^{-1/2}`.
    pub fn c0(&self) -> f64 {
        (self.rho0 * self.kappa0).sqrt().recip()
    }

    /// Static modulus `E0 = 1/kappa0`.
    pub fn e0(&self) -> f64 {
        1.0 / self.kappa0
    }

    /// High-frequency speed `c0 (tau_sigma/tau_eps)^{alpha/2}` for `alpha = beta`.
    pub fn c_infinity(&self) -> f64 {
        self.c0() * (self.tau_sigma / self.tau_eps).powf(self.alpha / 2.0)
    }

    /// `(tau_eps/tau_sigma)^alpha`, the high-frequency compressibility ratio.
    pub fn stiffening_ratio(&self) -> f64 {
        (self.tau_eps / self.tau_sigma).powf(self.alpha)
    }
}

/// The named parameter constraints of the fractional Zener model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    /// `E0 >= 0`
    E0NonNegative,
    /// `E0 tau_sigma^alpha > 0`
    E0TauSigmaPositive,
    /// `tau_sigma^alpha >= tau_eps^beta`
    TauSigmaDominates,
    /// `tau_eps^beta > 0`
    TauEpsPositive,
    /// `alpha = beta`
    AlphaEqualsBeta,
}

impl Constraint {
    pub const ALL: [Constraint; 5] = [
        Constraint::E0NonNegative,
        Constraint::E0TauSigmaPositive,
        Constraint::TauSigmaDominates,
        Constraint::TauEpsPositive,
        Constraint::AlphaEqualsBeta,
    ];

    pub fn expression(self) -> &'static str {
        match self {
            Constraint::E0NonNegative => "E0 >= 0",
            Constraint::E0TauSigmaPositive => "E0 tau_sigma^alpha > 0",
            Constraint::TauSigmaDominates => "tau_sigma^alpha >= tau_eps^beta",
            Constraint::TauEpsPositive => "tau_eps^beta > 0",
            Constraint::AlphaEqualsBeta => "alpha = beta",
        }
    }

    /// Whether the constraint holds. Any NaN along the way counts as a violation.
    pub fn holds(self, p: &FractionalZenerParams) -> bool {
        let e0 = 1.0 / p.kappa0;
        match self {
            Constraint::E0NonNegative => e0 >= 0.0,
            Constraint::E0TauSigmaPositive => e0 * p.tau_sigma.powf(p.alpha) > 0.0,
            Constraint::TauSigmaDominates => p.tau_sigma.powf(p.alpha) >= p.tau_eps.powf(p.beta),
            Constraint::TauEpsPositive => p.tau_eps.powf(p.beta) > 0.0,
            Constraint::AlphaEqualsBeta => p.alpha == p.beta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub violated_constraints: Vec<Constraint>,
    /// Set when the orders differ, so the model violates `alpha = beta`.
    pub requires_alpha_eq_beta: bool,
}

/// Evaluate each constraint independently and list every violation.
pub fn check_admissibility(p: &FractionalZenerParams) -> AdmissibilityReport {
    let violated_constraints: Vec<Constraint> =
        Constraint::ALL.into_iter().filter(|c| !c.holds(p)).collect();
    AdmissibilityReport {
        admissible: violated_constraints.is_empty(),
        requires_alpha_eq_beta: violated_constraints.contains(&Constraint::AlphaEqualsBeta),
        violated_constraints,
    }
}

fn require_omega(omega: f64) -> Result<()> {
    require_positive("omega", omega)
}

/// `kappa0 (1 + (i omega tau_eps)^beta) / (1 + (i omega tau_sigma)^alpha)`.
pub fn kappa_zener(p: &FractionalZenerParams, omega: f64) -> Result<Complex64> {
    p.require_finite_fields()?;
    require_omega(omega)?;
    let num = 1.0 + i_omega_pow(omega, p.tau_eps, p.beta);
    let den = 1.0 + i_omega_pow(omega, p.tau_sigma, p.alpha);
    Ok(p.kappa0 * num / den)
}

/// `tau_eps -> 0` limit: `kappa0 / (1 + (i omega tau_sigma)^alpha)`.
pub fn kappa_kelvin_voigt(p: &FractionalZenerParams, omega: f64) -> Result<Complex64> {
    p.require_finite_fields()?;
    require_omega(omega)?;
    Ok(p.kappa0 / (1.0 + i_omega_pow(omega, p.tau_sigma, p.alpha)))
}

/// Fractional Zener parameters with the extra `tau_sigma^beta` strain term,
/// restricted to `alpha <= beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModifiedZenerParams(FractionalZenerParams);

impl ModifiedZenerParams {
    pub fn new(p: FractionalZenerParams) -> Result<Self> {
        p.validate()?;
        if p.alpha > p.beta {
            return Err(Error::Domain(format!(
                "modified model requires alpha <= beta, got alpha = {}, beta = {}",
                p.alpha, p.beta
            )));
        }
        Ok(Self(p))
    }

    pub fn params(&self) -> &FractionalZenerParams {
        &self.0
    }
}

/// `kappa0 (1 + (i w tau_eps)^beta) / (1 + (i w tau_sigma)^alpha + (i w tau_sigma)^beta)`.
///
/// For `alpha = beta` the denominator is `1 + 2 (i w tau_sigma)^alpha`, which is
/// not the plain Zener model; no renormalization is applied.
pub fn kappa_modified_zener(p: &ModifiedZenerParams, omega: f64) -> Result<Complex64> {
    let q = p.params();
    require_omega(omega)?;
    let num = 1.0 + i_omega_pow(omega, q.tau_eps, q.beta);
    let den = 1.0 + i_omega_pow(omega, q.tau_sigma, q.alpha) + i_omega_pow(omega, q.tau_sigma, q.beta);
    Ok(q.kappa0 * num / den)
}

/// Time-domain relaxation kernel
/// `kappa0 (1 - (tau_eps/tau_sigma)^alpha) E_{alpha,1}(-(t/tau_sigma)^alpha)` for `alpha = beta`.
pub fn relaxation_response(p: &FractionalZenerParams, t: f64) -> Result<f64> {
    p.require_finite_fields()?;
    p.require_equal_orders()?;
    require_positive("t", t)?;
    let amplitude = p.kappa0 * (1.0 - p.stiffening_ratio());
    let e = ml_eval(MLParams::new(p.alpha, 1.0)?, -(t / p.tau_sigma).powf(p.alpha))?;
    Ok(amplitude * e)
}

/// Time-domain kernel of the modified model. Not available: no closed
/// inverse transform is known for it.
pub fn modified_zener_relaxation_response(_p: &ModifiedZenerParams, _t: f64) -> Result<f64> {
    Err(Error::Unavailable("time-domain kernel of the modified fractional Zener model"))
}

/// Constitutive laws selectable at run time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ConstitutiveModel {
    Zener(FractionalZenerParams),
    KelvinVoigt(FractionalZenerParams),
    Modified(ModifiedZenerParams),
}

impl ConstitutiveModel {
    pub fn params(&self) -> &FractionalZenerParams {
        match self {
            ConstitutiveModel::Zener(p) | ConstitutiveModel::KelvinVoigt(p) => p,
            ConstitutiveModel::Modified(m) => m.params(),
        }
    }
}

impl Compressibility for ConstitutiveModel {
    fn kappa(&self, omega: f64) -> Result<Complex64> {
        match self {
            ConstitutiveModel::Zener(p) => kappa_zener(p, omega),
            ConstitutiveModel::KelvinVoigt(p) => kappa_kelvin_voigt(p, omega),
            ConstitutiveModel::Modified(m) => kappa_modified_zener(m, omega),
        }
    }

    fn static_compressibility(&self) -> f64 {
        self.params().kappa0
    }
}

impl Compressibility for FractionalZenerParams {
    fn kappa(&self, omega: f64) -> Result<Complex64> {
        kappa_zener(self, omega)
    }

    fn static_compressibility(&self) -> f64 {
        self.kappa0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2() -> FractionalZenerParams {
        FractionalZenerParams::symmetric(1.0, 1.0, 1e-3, 0.5, 1.0).unwrap()
    }

    #[test]
    fn zener_reference_value() {
        let k = kappa_zener(&fig2(), 1.0).unwrap();
        assert!((k.re - 0.5158113883008418966599945).abs() < 1e-15);
        assert!((k.im + 0.2005574897123915240967471).abs() < 1e-15);
    }

    #[test]
    fn degenerate_medium_is_lossless() {
        let p = FractionalZenerParams::symmetric(2.0, 1e-3, 1e-3, 0.7, 1.0).unwrap();
        for w in [1e-3, 1.0, 1e3, 1e9] {
            let k = kappa_zener(&p, w).unwrap();
            assert!((k - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn kelvin_voigt_hand_value() {
        let p = FractionalZenerParams::symmetric(1.0, 1.0, 1e-3, 1.0, 1.0).unwrap();
        let k = kappa_kelvin_voigt(&p, 1.0).unwrap();
        assert!((k - Complex64::new(0.5, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn modified_reference_and_factor_two() {
        let p = FractionalZenerParams::new(1.0, 1.0, 0.1, 0.4, 0.8, 1.0).unwrap();
        let m = ModifiedZenerParams::new(p).unwrap();
        let k = kappa_modified_zener(&m, 10.0).unwrap();
        assert!((k.re - 0.1688711642644019808085261).abs() < 1e-15);
        assert!((k.im + 0.06255188802418683959908049).abs() < 1e-15);

        let q = fig2();
        let m = ModifiedZenerParams::new(q).unwrap();
        let w = 3.0;
        let expected = q.kappa0 * (1.0 + i_omega_pow(w, q.tau_eps, 0.5)) / (1.0 + 2.0 * i_omega_pow(w, q.tau_sigma, 0.5));
        assert!((kappa_modified_zener(&m, w).unwrap() - expected).norm() < 1e-15);

        let bad = FractionalZenerParams::new(1.0, 1.0, 0.1, 0.8, 0.4, 1.0).unwrap();
        assert!(ModifiedZenerParams::new(bad).is_err());
        assert!(matches!(modified_zener_relaxation_response(&m, 1.0), Err(Error::Unavailable(_))));
    }

    #[test]
    fn rejects_bad_frequencies() {
        assert!(kappa_zener(&fig2(), 0.0).is_err());
        assert!(kappa_zener(&fig2(), f64::NAN).is_err());
        assert!(kappa_kelvin_voigt(&fig2(), -1.0).is_err());
    }

    #[test]
    fn admissibility_examples() {
        let ok = FractionalZenerParams::symmetric(1.0, 2.0, 1.0, 0.5, 1.0).unwrap();
        assert!(check_admissibility(&ok).admissible);

        let unequal = FractionalZenerParams::new(1.0, 2.0, 1.0, 0.5, 0.7, 1.0).unwrap();
        let r = check_admissibility(&unequal);
        assert!(!r.admissible && r.requires_alpha_eq_beta);
        assert_eq!(r.violated_constraints, vec![Constraint::AlphaEqualsBeta]);

        let swapped = FractionalZenerParams::symmetric(1.0, 1.0, 2.0, 1.0, 1.0).unwrap();
        assert_eq!(
            check_admissibility(&swapped).violated_constraints,
            vec![Constraint::TauSigmaDominates]
        );
    }

    #[test]
    fn relaxation_response_values() {
        let r = relaxation_response(&fig2(), 1.0).unwrap();
        assert!((r - 0.4140621962484828703482858).abs() < 1e-13);
        let debye = FractionalZenerParams::symmetric(1.0, 2.0, 0.5, 1.0, 1.0).unwrap();
        let r = relaxation_response(&debye, 3.0).unwrap();
        assert!((r - 0.75 * (-1.5f64).exp()).abs() < 1e-15);
        let unequal = FractionalZenerParams::new(1.0, 2.0, 1.0, 0.5, 0.7, 1.0).unwrap();
        assert!(relaxation_response(&unequal, 1.0).is_err());
    }

    #[test]
    fn sound_speed_round_trip() {
        let p = FractionalZenerParams::from_sound_speed(1540.0, 1000.0, 1e-6, 1e-9, 0.5, 0.5).unwrap();
        assert!((p.c0() - 1540.0).abs() < 1e-9);
        assert!((fig2().c_infinity() - 1000f64.powf(0.25)).abs() < 1e-12);
    }
}
