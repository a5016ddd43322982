mod common;

use common::{admissibility_truth_table, params};
use fracwave::constitutive::*;
use fracwave::mittag_leffler::{ml_eval, MLParams};
use proptest::prelude::*;

#[test]
fn truth_table_flags_exactly_the_violations() {
    for (label, p, expected) in admissibility_truth_table() {
        let r = check_admissibility(&p);
        assert_eq!(r.violated_constraints, expected, "{label}");
        assert_eq!(r.admissible, expected.is_empty(), "{label}");
        assert_eq!(r.requires_alpha_eq_beta, expected.contains(&Constraint::AlphaEqualsBeta), "{label}");
    }
}

fn fig2_like() -> FractionalZenerParams {
    params(1.0, 1.0, 1e-3, 0.5, 0.5)
}

#[test]
fn relaxation_response_uses_mittag_leffler() {
    let p = fig2_like();
    for &t in &[1e-3, 0.1, 1.0, 10.0, 1e3] {
        let expected = (1.0 - (1e-3f64).sqrt()) * ml_eval(MLParams::new(0.5, 1.0).unwrap(), -(t as f64).sqrt()).unwrap();
        assert!((relaxation_response(&p, t).unwrap() - expected).abs() < 1e-14);
    }
    let m = ModifiedZenerParams::new(params(1.0, 1.0, 1e-3, 0.4, 0.6)).unwrap();
    assert!(modified_zener_relaxation_response(&m, 1.0).is_err());
}

#[test]
fn model_limits() {
    let p = fig2_like();
    assert!((kappa_zener(&p, 1e-12).unwrap() - 1.0).norm() < 1e-5);
    let hi = kappa_zener(&p, 1e16).unwrap();
    assert!((hi.re - (1e-3f64).sqrt()).abs() < 1e-6);
    // Kelvin-Voigt is the tau_eps -> 0 limit
    let kv = kappa_kelvin_voigt(&p, 3.0).unwrap();
    let near = kappa_zener(&params(1.0, 1.0, 1e-30, 0.5, 0.5), 3.0).unwrap();
    assert!((kv - near).norm() < 1e-14);
    // with alpha = beta the four-term denominator collapses to 1 + 2 (i omega tau_sigma)^alpha
    let m = ModifiedZenerParams::new(p).unwrap();
    for &w in &[1e-3, 1.0, 1e3] {
        let expected = (1.0 + i_omega_pow(w, 1e-3, 0.5)) / (1.0 + 2.0 * i_omega_pow(w, 1.0, 0.5));
        assert!((kappa_modified_zener(&m, w).unwrap() - expected).norm() < 1e-14);
    }
    assert!(ModifiedZenerParams::new(params(1.0, 1.0, 1e-3, 0.7, 0.6)).is_err());
}

proptest! {
    #[test]
    fn admissible_sets_dissipate(
        log_ts in -6.0f64..3.0,
        log_ratio in 0.0f64..6.0,
        alpha in 0.01f64..=1.0,
        log_w in -8.0f64..8.0,
    ) {
        let ts = 10f64.powf(log_ts);
        let p = params(1.0, ts, ts / 10f64.powf(log_ratio), alpha, alpha);
        prop_assert!(check_admissibility(&p).admissible);
        let k = kappa_zener(&p, 10f64.powf(log_w) / ts).unwrap();
        prop_assert!(k.im <= 0.0);
        prop_assert!(k.re > 0.0);
        prop_assert!(k.re <= 1.0 + 1e-12);
    }

    #[test]
    fn checker_matches_each_predicate(
        kappa0 in prop_oneof![Just(-1.0), Just(0.0), 1e-3f64..10.0],
        ts in prop_oneof![Just(0.0), 1e-3f64..10.0],
        te in prop_oneof![Just(0.0), 1e-3f64..10.0],
        alpha in 0.01f64..=1.0,
        beta in prop_oneof![Just(0.5), 0.01f64..=1.0],
    ) {
        let p = params(kappa0, ts, te, alpha, beta);
        let r = check_admissibility(&p);
        let e0 = 1.0 / kappa0;
        let expected: Vec<Constraint> = [
            (Constraint::E0NonNegative, e0 >= 0.0),
            (Constraint::E0TauSigmaPositive, e0 * ts.powf(alpha) > 0.0),
            (Constraint::TauSigmaDominates, ts.powf(alpha) >= te.powf(beta)),
            (Constraint::TauEpsPositive, te.powf(beta) > 0.0),
            (Constraint::AlphaEqualsBeta, alpha == beta),
        ]
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(c, _)| c)
        .collect();
        prop_assert_eq!(r.violated_constraints, expected);
    }
}
