use fracwave::causality::{
    causality_report, finite_speed_check, finite_speed_check_kelvin_voigt,
};
use fracwave::constitutive::FractionalZenerParams;
use fracwave::special::log_space;

fn main() -> fracwave::Result<()> {
    let p = FractionalZenerParams::symmetric(1.0, 1.0, 1e-3, 0.5, 1.0)?;
    let grid = log_space(1e-4, 1e7, 221);
    let r = causality_report(&p, &grid)?;
    println!("Kramers-Kronig max rel err  {:.3e}", r.kk_max_rel_error);
    println!("phase speed bounded         {}", r.phase_speed_bounded);
    println!("high-frequency exponent     {:.4}", r.hf_attenuation_exponent);
    println!("distribution nonnegative    {}", r.distribution_nonnegative);
    println!("passes                      {}", r.passes());

    let z = finite_speed_check(&p)?;
    println!("\nzener: c({:.1e}) = {:.6}, c_inf = {:.6}", z.probe_omega, z.c_probe, z.c_infinity);
    let kv = finite_speed_check_kelvin_voigt(&p)?;
    println!("kelvin-voigt: c({:.1e}) = {:.3e}, bounded = {}", kv.probe_omega, kv.c_probe, kv.bounded);

    Ok(())
}
