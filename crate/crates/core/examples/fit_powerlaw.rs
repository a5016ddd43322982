use fracwave::constitutive::FractionalZenerParams;
use fracwave::fitting::{
    discrete_admissible, fit_discrete_path, fit_zener, synthesize_powerlaw_target, DiscreteInit,
    FitOptions,
};

fn main() -> fracwave::Result<()> {
    // soft-tissue-like attenuation: alpha_k ~ omega^1.1 over two decades
    let (rho0, c0) = (1000.0, 1540.0);
    let kappa0 = 1.0 / (rho0 * c0 * c0);
    let a0 = 5.76 / (2.0 * std::f64::consts::PI * 1e6f64).powf(1.1);
    let target = synthesize_powerlaw_target(1.1, a0, (1e5, 1e7), 41)?;

    let init = FractionalZenerParams::from_sound_speed(c0, rho0, 1e-5, 1e-7, 0.5, 0.5)?;
    // a single power law is matched by the low-frequency branch, exponent 1 + alpha
    let z = fit_zener(&target, &init)?;
    println!(
        "zener: tau_sigma={:.4e} tau_eps={:.4e} alpha={:.4} rms={:.3e} converged={}",
        z.params.tau_sigma, z.params.tau_eps, z.params.alpha, z.residual_rms, z.converged
    );

    let path = fit_discrete_path(&target, 4, DiscreteInit { kappa0, rho0 }, &FitOptions::default())?;
    for (n, r) in path.iter().enumerate() {
        println!(
            "N={}: rms={:.3e} admissible={}",
            n + 1,
            r.residual_rms,
            discrete_admissible(&r.params)
        );
        for m in &r.params.mechanisms {
            println!("    tau={:.4e} s  kappa={:.4e} 1/Pa", m.tau, m.kappa);
        }
    }
    Ok(())
}
