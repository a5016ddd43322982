use fracwave::causality::{nonnegativity_scan, scan_grid};
use fracwave::constitutive::{check_admissibility, FractionalZenerParams};
use fracwave::relaxation_spectrum::ContinuumDistribution;

fn main() -> fracwave::Result<()> {
    // alpha <= beta: the distribution is kappa'_nuML
    println!("{:>5} {:>5} {:>10} {:>12} {:>14}", "alpha", "beta", "admissible", "nonnegative", "first < 0");
    for (a, b) in [(0.3, 0.5), (0.4, 0.9), (0.5, 0.5), (0.7, 0.7)] {
        let p = FractionalZenerParams::new(1.0, 1.0, 1e-3, a, b, 1.0)?;
        let d = if a == b {
            ContinuumDistribution::ml(p)?
        } else {
            ContinuumDistribution::ml_prime(p)?
        };
        let s = nonnegativity_scan(&d, &scan_grid(&p, 16.0, 20))?;
        let first = s.first_violation.map_or("-".to_string(), |w| format!("{w:.4e}"));
        println!(
            "{a:>5} {b:>5} {:>10} {:>12} {first:>14}",
            check_admissibility(&p).admissible,
            s.nonnegative
        );
    }
    Ok(())
}
