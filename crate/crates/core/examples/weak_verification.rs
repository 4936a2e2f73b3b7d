//! Weak-form residuals, boundary quantities and endpoint power of a profile.
use compacton::numeric::{shoot, ShootOptions};
use compacton::profile::{construct, EquationKind, EquationParams, FamilyId};
use compacton::weak::{boundary_quantities, default_battery, endpoint_power_fit, verify};

fn main() -> compacton::error::Result<()> {
    let p = construct(FamilyId::Zsq1, 2.0, 1.0, 1.0, 1.0)?;
    let battery = default_battery(p.l, None);
    for kind in [EquationKind::K, EquationKind::KP] {
        let r = verify(&p, &p.params, p.g, &battery, kind, 1e-7)?;
        println!("zsq1, {kind}: max scaled residual {:.2e} over {} bumps, passed {}", r.max_abs_scaled, r.entries.len(), r.passed);
    }
    let bq = boundary_quantities(&p, &p.params, p.g, p.l);
    println!("A1..A4 at L (scaled): {}", bq.scaled.map(|v| format!("{v:.2e}")).join(" "));
    println!("endpoint power: fitted {:.4}, exact {}", endpoint_power_fit(&p, p.l)?, p.p);

    // A numerically computed profile goes through the same checks.
    let params = EquationParams::k(2.25, 2.0, 1.0, 1.0)?;
    let nc = shoot(&params, 1.0, &ShootOptions::default())?;
    let r = verify(&nc, &params, 1.0, &default_battery(nc.l_shoot, Some(1)), EquationKind::K, 1e-7)?;
    println!("numeric m=9/4: max scaled residual {:.2e}, passed {}", r.max_abs_scaled, r.passed);
    Ok(())
}
