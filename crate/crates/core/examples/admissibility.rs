use fracwave::constitutive::{check_admissibility, FractionalZenerParams};

fn main() -> fracwave::Result<()> {
    let cases = [
        (1.0, 1e-3, 0.5, 0.5),
        (1.0, 1e-3, 0.3, 0.7),
        (1e-3, 1.0, 0.5, 0.5),
        (1.0, 1e-3, 0.9, 0.4),
    ];
    for (ts, te, a, b) in cases {
        let p = FractionalZenerParams::new(1.0, ts, te, a, b, 1.0)?;
        let r = check_admissibility(&p);
        let violated: Vec<&str> = r.violated_constraints.iter().map(|c| c.expression()).collect();
        println!(
            "tau_sigma={ts:e} tau_eps={te:e} alpha={a} beta={b}: admissible={} violated={violated:?}",
            r.admissible
        );
    }
    Ok(())
}
