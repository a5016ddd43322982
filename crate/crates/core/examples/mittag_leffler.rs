use fracwave::mittag_leffler::{
    ml_evaluate, spectral_function, verify_fourier_pair, verify_laplace_representation, MLParams,
    SpectralFunctionParams,
};
use fracwave::special::log_space;

fn main() -> fracwave::Result<()> {
    // E_{a,b}(-t) across the strategy crossovers
    let p = MLParams::new(0.5, 1.0)?;
    println!("{:>10} {:>24} {:>11} {:>10}", "t", "E_{0.5,1}(-t)", "strategy", "bound");
    for t in [0.01, 0.1, 1.0, 5.0, 20.0, 100.0, 1e4] {
        let e = ml_evaluate(p, -t)?;
        println!("{t:>10.2e} {:>24.16e} {:>11?} {:>10.1e}", e.value, e.strategy, e.error_bound);
    }

    // E_{1/2,1}(-t) = exp(t^2) erfc(t)
    let t: f64 = 2.0;
    let closed = (t * t).exp() * libm::erfc(t);
    println!("\nE_(1/2)(-2) = {:.16e}, closed form {:.16e}", ml_evaluate(p, -t)?.value, closed);

    // spectral function and its Laplace representation
    let s = SpectralFunctionParams::new(0.6, 1.0, 1.0)?;
    println!("\nK_{{0.6,1}}(omega):");
    for w in [0.1, 1.0, 10.0] {
        println!("  omega = {w:>5}: {:.12e}", spectral_function(s, w)?);
    }
    let err = verify_laplace_representation(s, 1.5)?;
    println!("Laplace representation at t = 1.5: rel err {err:.2e}");

    let grid = log_space(1e-2, 1e2, 9);
    let err = verify_fourier_pair(MLParams::new(0.6, 1.0)?, 1.0, &grid)?;
    println!("Fourier pair over 4 decades: max rel err {err:.2e}");
    Ok(())
}
