//! Every closed-form family at a point inside its weak existence range.
use compacton::existence::{table1_intervals, unit_coefficients};
use compacton::profile::{construct, FamilyId};

fn main() -> compacton::error::Result<()> {
    println!("{:<7} {:>3} {:>7} {:>7} {:>12} {:>12} {:>12} {:>8}", "family", "var", "m", "n", "alpha", "beta", "L", "p");
    for f in FamilyId::ALL {
        let (lo, hi) = table1_intervals(f).weak_k.endpoints();
        let x = if hi.is_finite() { 0.5 * (lo + hi) } else { 1.5 * lo };
        let (a, b, g) = unit_coefficients(f);
        let p = construct(f, x, a, b, g)?;
        println!(
            "{:<7} {:>3} {:>7.4} {:>7.4} {:>12.6} {:>12.6} {:>12.6} {:>8.4}",
            f.name(),
            f.free_var(),
            p.params.m,
            p.params.n,
            p.alpha,
            p.beta,
            p.l,
            p.p
        );
    }
    Ok(())
}
