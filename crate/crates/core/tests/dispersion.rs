mod common;

use common::{fig2, params};
use fracwave::constitutive::{check_admissibility, kappa_zener};
use fracwave::dispersion::*;
use fracwave::regimes::{RegimeWindows, Window};
use fracwave::relaxation_spectrum::{DiscreteRelaxationSet, Mechanism};
use fracwave::special::log_space;
use proptest::prelude::*;

#[test]
fn fig2_regime_slopes_in_outer_windows() {
    let r = attenuation_regimes(&fig2()).unwrap();
    assert!(r.low.deviation().unwrap() < 0.05, "{:?}", r.low);
    assert!(r.high.deviation().unwrap() < 0.05, "{:?}", r.high);
}

#[test]
fn intermediate_slope_approaches_analytic_for_wide_separation() {
    // the 1 - alpha/2 regime sharpens as tau_sigma/tau_eps grows
    let mut last = f64::INFINITY;
    for ratio in [1e3, 1e6, 1e9, 1e12] {
        let p = params(1.0, 1.0, 1.0 / ratio, 0.5, 0.5);
        let r = attenuation_regimes(&p).unwrap();
        let dev = r.mid.unwrap().deviation().unwrap();
        assert!(dev < last, "ratio {ratio:e}: {dev}");
        last = dev;
    }
    assert!(last < 0.02, "{last}");
}

#[test]
fn custom_windows() {
    let w = RegimeWindows {
        low: Window::new(1e-8, 1e-7),
        mid: Window::decade_around(31.6),
        high: Window::new(1e7, 1e8),
    };
    let r = attenuation_regimes_in(&fig2(), &w).unwrap();
    assert_eq!(r.low.window, w.low);
    assert!(r.low.deviation().unwrap() < 1e-3);
    assert!(r.high.deviation().unwrap() < 2e-3);
}

#[test]
fn c_infinity_matches_stiffening() {
    let p = fig2();
    assert!((p.c_infinity() / p.c0() - 5.62341325190349080394951).abs() < 1e-12);
    let c = zener_phase_speed(&p, 1e14).unwrap();
    assert!((c / p.c_infinity() - 1.0).abs() < 1e-3);
}

#[test]
fn sweep_agrees_with_pointwise_evaluation() {
    let p = fig2();
    let grid = log_space(1e-4, 1e6, 41);
    let d = attenuation_and_speed(&p, &grid).unwrap();
    assert_eq!(d.len(), 41);
    assert!((d.decades() - 10.0).abs() < 1e-12);
    for (i, &w) in grid.iter().enumerate() {
        let k = wavenumber(kappa_zener(&p, w).unwrap(), p.rho0, w).unwrap();
        assert_eq!(d.k[i], k);
        assert_eq!(d.alpha_k[i], zener_attenuation(&p, w).unwrap());
    }
}

#[test]
fn discrete_sweep() {
    let s = DiscreteRelaxationSet::new(1.0, vec![Mechanism { tau: 1.0, kappa: 0.5 }]).unwrap();
    let d = dispersion_sweep(&s, 1.0, &[1e-6, 1e6]).unwrap();
    assert!((d.c_p[0] - 1.0).abs() < 1e-6);
    assert!((d.c_p[1] - 2f64.sqrt()).abs() < 1e-6);
}

proptest! {
    #[test]
    fn admissible_media_attenuate_and_speed_up(
        log_ratio in 0.5f64..6.0,
        alpha in 0.05f64..=1.0,
        log_w in -6.0f64..9.0,
        dw in 0.01f64..1.0,
    ) {
        let p = params(1.0, 1.0, 10f64.powf(-log_ratio), alpha, alpha);
        prop_assert!(check_admissibility(&p).admissible);
        let w = 10f64.powf(log_w);
        let d = attenuation_and_speed(&p, &[w, w * (1.0 + dw)]).unwrap();
        prop_assert!(d.k[0].re > 0.0);
        prop_assert!(d.alpha_k[0] >= 0.0 && d.alpha_k[1] > d.alpha_k[0]);
        prop_assert!(d.c_p[1] >= d.c_p[0] * (1.0 - 1e-12));
        prop_assert!(d.c_p[0] >= p.c0() * (1.0 - 1e-12) && d.c_p[0] <= p.c_infinity() * (1.0 + 1e-12));
    }
}
