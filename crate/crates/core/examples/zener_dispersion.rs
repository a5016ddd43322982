use fracwave::constitutive::FractionalZenerParams;
use fracwave::dispersion::{attenuation_and_speed, attenuation_regimes};
use fracwave::special::log_space;

fn main() -> fracwave::Result<()> {
    // tau_sigma = 1 s, tau_eps = 1 ms, alpha = beta = 1/2
    let p = FractionalZenerParams::symmetric(1.0, 1.0, 1e-3, 0.5, 1.0)?;
    let grid = log_space(1e-6, 1e6, 13);
    let d = attenuation_and_speed(&p, &grid)?;

    println!("{:>12} {:>14} {:>12}", "omega", "alpha_k", "c_p/c0");
    for i in 0..d.len() {
        println!("{:>12.1e} {:>14.6e} {:>12.6}", d.omega[i], d.alpha_k[i], d.c_p[i] / p.c0());
    }
    println!("c_inf/c0 = {:.6}", p.c_infinity() / p.c0());

    let r = attenuation_regimes(&p)?;
    println!("\nregime  analytic  fitted");
    let row = |name: &str, s: &fracwave::regimes::RegimeSlope| {
        println!("{name:<7} {:>8.4}  {:>6.4}", s.analytic, s.fitted.unwrap_or(f64::NAN));
    };
    row("low", &r.low);
    if let Some(mid) = &r.mid {
        row("mid", mid);
    }
    row("high", &r.high);
    if let Some(note) = &r.note {
        println!("note: {note}");
    }
    Ok(())
}
