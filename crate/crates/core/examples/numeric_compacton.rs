//! Compactons outside the closed-form catalog, computed by shooting.
use compacton::numeric::{shoot, ShootOptions};
use compacton::profile::EquationParams;

fn main() -> compacton::error::Result<()> {
    for (m, n, a, b) in [(2.25, 2.0, 1.0, 1.0), (0.5, 0.9, 1.0, -1.0)] {
        let params = EquationParams::k(m, n, a, b)?;
        let nc = shoot(&params, 1.0, &ShootOptions::default())?;
        println!("m = {m}, n = {n}, a = {a}, b = {b}, g = 1");
        println!("  V0           = {:.15}", nc.v0);
        println!("  L quadrature = {:.15}", nc.l_quadrature);
        println!("  L shooting   = {:.15}", nc.l_shoot);
        println!("  energy defect (scaled) = {:.2e}", nc.scaled_energy_residual());
        println!("  cutoff residuals (scaled) = {}", nc.scaled_cutoff_residuals().map(|v| format!("{v:.2e}")).join(" "));
        println!("  handover to the tail at xi = {:.6}", nc.diagnostics.handover_xi);
        let i = nc.grid.len() * 3 / 4;
        println!("  U({:.4}) = {:.12}", nc.grid[i], nc.u[i]);
    }
    Ok(())
}
