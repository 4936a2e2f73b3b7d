//! Cutting a cosine compacton at half height breaks the weak formulation.
use compacton::profile::{construct, EquationKind, FamilyId};
use compacton::weak::{boundary_quantities, default_battery, verify, Lowered, ProfileFn, Truncated};

fn main() -> compacton::error::Result<()> {
    let p = construct(FamilyId::Cos1, 2.0, 1.0, 1.0, 1.0)?;
    let battery = default_battery(p.l, None);

    let lowered = Lowered::new(&p, 0.5);
    let truncated = Truncated { inner: &p, cut: 0.5 * p.l };
    let cases: [(&str, &dyn ProfileFn); 3] = [("exact", &p), ("lowered by U(0)/2", &lowered), ("truncated at L/2", &truncated)];
    for (name, prof) in cases {
        let r = verify(prof, &p.params, p.g, &battery, EquationKind::K, 1e-7)?;
        let bq = boundary_quantities(prof, &p.params, p.g, prof.half_width());
        println!("{name:>18}: max scaled residual {:.2e}, A1..A4 {}", r.max_abs_scaled, bq.scaled.map(|v| format!("{v:.2e}")).join(" "));
    }
    Ok(())
}
