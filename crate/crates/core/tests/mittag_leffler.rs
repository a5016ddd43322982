use fracwave::mittag_leffler::{
    ml_eval, ml_evaluate, spectral_function, verify_fourier_pair, verify_laplace_representation,
    MLParams, SpectralFunctionParams,
};
use fracwave::special::log_space;
use proptest::prelude::*;

// (a, b, x, E_{a,b}(x)) at 50 digits from tests/oracles/generate.py
const REFERENCE: &[(f64, f64, f64, f64)] = &[
    (0.5, 1.0, -1.0, 0.4275835761558070044107503),  // series
    (0.5, 1.0, -3.0, 0.1790011511813899504192948),  // series
    (0.5, 1.0, -15.0, 0.03752960638850576574606118),  // erfc
    (0.5, 1.0, -10000.0, 0.00005641895807268084115235157),  // erfc
    (0.3, 0.6, -0.5, 0.3810325048339385463486727),  // series
    (0.3, 0.6, -2.0, 0.1511051766726715230643493),  // series
    (0.3, 0.6, -50.0, 0.006683649095378413798303451),  // talbot
    (0.9, 0.95, -1.0, 0.3429350525228093170224921),  // series
    (0.9, 0.95, -12.0, 0.005515561886304374629294334),  // series
    (0.9, 0.95, -300.0, 0.0001727346908457276840566555),  // talbot
    (0.75, 1.0, -5.0, 0.0679239743326439421219161),  // series
    (0.75, 1.0, -1000.0, 0.0002760980126362774281331367),  // talbot
    (0.25, 1.0, -1.5, 0.3632779032999525934734228),  // series
    (0.25, 1.0, -40.0, 0.02005291268277311682933137),  // talbot
    (0.5, 0.5, -7.0, 0.005589203243685752519027968),  // series
    (1.5, 1.0, -20.0, 0.01959574793018750573533103),  // series
    (1.5, 1.0, -200.0, -0.001410024247936977252877485),  // talbot
    (1.8, 1.2, -30.0, 0.2315264386460426317368341),  // series
    (1.0, 0.7, -25.0, -0.009776676322966295200918182),  // series
    (1.0, 0.7, -800.0, -0.0002893645014753923549102005),  // talbot
    (0.6, 1.0, 2.5, 166.4957169105694015208953),  // series
    (0.2, 1.8, -3.0, 0.2786099640286487539420478),  // series
    (0.2, 1.8, -2000.0, 0.0005593058479886440861412975),  // talbot
];

#[test]
fn matches_high_precision_reference() {
    for &(a, b, x, expected) in REFERENCE {
        let e = ml_evaluate(MLParams::new(a, b).unwrap(), x).unwrap();
        let err = (e.value - expected).abs();
        let tol = 1e-12_f64.max(1e-11 * expected.abs());
        assert!(
            err <= tol,
            "E_({a},{b})({x}) = {} via {:?}, expected {expected}, error {err:e}",
            e.value,
            e.strategy
        );
    }
}

#[test]
fn exponential_identity() {
    let p = MLParams::new(1.0, 1.0).unwrap();
    for i in 0..=700 {
        let x = -30.0 + 35.0 * i as f64 / 700.0;
        let v = ml_eval(p, x).unwrap();
        assert!(((v - x.exp()) / x.exp()).abs() < 1e-12, "x = {x}");
    }
}

#[test]
fn cosine_identity() {
    let p = MLParams::new(2.0, 1.0).unwrap();
    for i in 0..=400 {
        let x = 20.0 * i as f64 / 400.0;
        let v = ml_eval(p, -x * x).unwrap();
        assert!((v - x.cos()).abs() < 1e-10, "x = {x}: {v} vs {}", x.cos());
    }
}

#[test]
fn spectral_function_reference() {
    let p = SpectralFunctionParams::new(0.3, 0.6, 2.0).unwrap();
    let v = spectral_function(p, 5.0).unwrap();
    assert!((v - 0.059454846551475113957731).abs() < 1e-16);
}

#[test]
fn laplace_representation_grid() {
    for (a, b) in [(0.3, 0.6), (0.5, 0.5), (0.5, 1.0), (0.9, 0.95)] {
        let p = SpectralFunctionParams::new(a, b, 1.0).unwrap();
        for t in log_space(1e-2, 1e2, 9) {
            let r = verify_laplace_representation(p, t).unwrap();
            assert!(r < 1e-8, "a={a} b={b} t={t}: {r:e}");
        }
    }
}

#[test]
fn fourier_pair_mid_band() {
    let p = MLParams::new(0.5, 0.5).unwrap();
    let err = verify_fourier_pair(p, 1.0, &log_space(1e-1, 1e1, 5)).unwrap();
    assert!(err < 1e-3, "{err:e}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectral_function_is_non_negative(a in 0.02f64..0.98, frac in 0.0f64..1.0,
                                         rate in 1e-3f64..1e3, w in -6.0f64..6.0) {
        let b = a + frac * (1.0 - a);
        let p = SpectralFunctionParams::new(a, b, rate).unwrap();
        prop_assert!(spectral_function(p, 10f64.powf(w)).unwrap() >= 0.0);
    }

    #[test]
    fn relaxation_type_values_are_completely_monotone(a in 0.05f64..0.99, x in 0.0f64..50.0) {
        // 0 < E_{a,1}(-x) <= 1 and decreasing in x
        let p = MLParams::new(a, 1.0).unwrap();
        let v0 = ml_eval(p, -x).unwrap();
        let v1 = ml_eval(p, -x * 1.01 - 1e-3).unwrap();
        prop_assert!(v0 > 0.0 && v0 <= 1.0 + 1e-12);
        prop_assert!(v1 <= v0 + 1e-12);
    }

    #[test]
    fn certified_on_both_sides_of_crossover(a in 0.2f64..0.95, b in 0.3f64..1.0) {
        let p = MLParams::new(a, b).unwrap();
        let x = -(2.0f64).powf(a);
        let e = ml_evaluate(p, x).unwrap();
        let far = ml_evaluate(p, x * 6.0).map_err(|e| TestCaseError::fail(format!("{a} {b} {x}: {e}")))?;
        prop_assert!(e.error_bound < 1e-10 && far.error_bound < 1e-10);
    }
}

#[test]
fn no_jumps_at_strategy_crossovers() {
    // a mismatch between strategies shows up as a kink in the second difference
    for (a, b) in [(0.3, 0.6), (0.5, 1.0), (0.8, 0.9), (1.0, 0.7), (1.6, 1.0), (0.4, 1.7)] {
        let p = MLParams::new(a, b).unwrap();
        let h = 1e-3;
        let at = |x: f64| ml_evaluate(p, x).unwrap();
        let mut x: f64 = -0.05;
        let mut crossings = 0;
        while x > -200.0 {
            let next = x - 0.01 * (1.0 + x.abs());
            if at(x).strategy != at(next).strategy {
                crossings += 1;
                // bisect to the switch point
                let (mut lo, mut hi) = (next, x);
                while hi - lo > 4.0 * h {
                    let mid = 0.5 * (lo + hi);
                    if at(mid).strategy == at(hi).strategy {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                let c = hi;
                let v: Vec<f64> = (-3..=4).map(|k| at(c - k as f64 * h).value).collect();
                let d2: Vec<f64> = v.windows(3).map(|w| w[0] - 2.0 * w[1] + w[2]).collect();
                let scale = d2.iter().fold(0.0f64, |m, d| m.max(d.abs()));
                let spread = d2.iter().fold(f64::NEG_INFINITY, |m, d| m.max(*d))
                    - d2.iter().fold(f64::INFINITY, |m, d| m.min(*d));
                assert!(
                    spread < 0.5 * scale + 1e-11,
                    "a={a} b={b} x={c}: second differences {d2:?}"
                );
            }
            x = next;
        }
        assert!(crossings >= 1, "a={a} b={b} never leaves the Taylor series");
    }
}
