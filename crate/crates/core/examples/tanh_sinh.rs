//! Double-exponential quadrature of integrands with endpoint singularities.
use compacton::quadrature::{integrate_panels, TanhSinh};

fn main() -> compacton::error::Result<()> {
    let rule = TanhSinh::default();

    // ∫₀¹ x^{-0.9} dx = 10; the distance to the endpoint is passed exactly.
    let r = rule.integrate(|n| n.from_left.powf(-0.9), 0.0, 1.0)?;
    println!("int x^-0.9     = {:.15} ({} evaluations)", r.value, r.evaluations);

    // ∫₋₁¹ (1−x²)^{-1/2} dx = π
    let r = rule.integrate(|n| (n.from_left * n.from_right).powf(-0.5), -1.0, 1.0)?;
    println!("arcsine weight = {:.15} (pi = {:.15})", r.value, std::f64::consts::PI);

    // A kink at 0.3 is handled by splitting the interval there.
    let r = integrate_panels(&rule, |x| (x - 0.3).abs(), &[-1.0, 0.3, 1.0], 8)?;
    println!("int |x-0.3|    = {:.15} (exact 1.09)", r.value);
    Ok(())
}
