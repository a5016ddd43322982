use fracwave::constitutive::{kappa_zener, FractionalZenerParams};
use fracwave::relaxation_spectrum::{
    kappa_continuum, kappa_discrete, ContinuumDistribution, DiscreteRelaxationSet,
};

fn main() -> fracwave::Result<()> {
    let p = FractionalZenerParams::symmetric(1.0, 1.0, 1e-3, 0.5, 1.0)?;
    let dist = ContinuumDistribution::ml(p)?;

    // continuum of Debye mechanisms against the closed-form Zener law
    println!("{:>8} {:>26} {:>10}", "omega", "kappa_Z", "rel diff");
    for w in [1e-3, 1e-1, 1.0, 1e1, 1e3, 1e5] {
        let z = kappa_zener(&p, w)?;
        let c = kappa_continuum(&dist, w)?;
        println!("{w:>8.0e} {:>12.8}{:+.8}i {:>10.2e}", z.re, z.im, (c - z).norm() / z.norm());
    }

    // N discrete mechanisms sampled from the same distribution
    println!("\n{:>4} {:>12}", "N", "max rel err");
    let probe = [1e-1, 1.0, 1e1, 1e2];
    for n in [16, 64, 256] {
        let s = DiscreteRelaxationSet::from_distribution(&dist, n, 1e-14, 1e17)?;
        let mut worst: f64 = 0.0;
        for w in probe {
            let z = kappa_zener(&p, w)?;
            worst = worst.max((kappa_discrete(&s, w)? - z).norm() / z.norm());
        }
        println!("{n:>4} {worst:>12.3e}");
    }
    Ok(())
}
