//! The oscillator factor: ½ conserves the first integral, 2 does not.
use compacton::numeric::{shoot, ForceFactor, ShootOptions};
use compacton::profile::EquationParams;

fn main() -> compacton::error::Result<()> {
    let params = EquationParams::k(2.25, 2.0, 1.0, 1.0)?;
    for force in [ForceFactor::Half, ForceFactor::Two] {
        let nc = shoot(&params, 1.0, &ShootOptions { force, ..Default::default() })?;
        println!(
            "{force:?}: energy defect {:.3e}, L_shoot {:.6} vs L_quadrature {:.6}",
            nc.scaled_energy_residual(),
            nc.l_shoot,
            nc.l_quadrature
        );
    }
    Ok(())
}
