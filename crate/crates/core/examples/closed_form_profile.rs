//! The cosine compacton U = (4c/3) cos²(ξ/4) of K(2,2), sampled and exported.
use compacton::profile::{construct, FamilyId};

fn main() -> compacton::error::Result<()> {
    let c = 1.0;
    let p = construct(FamilyId::Cos1, 2.0, 1.0, 1.0, c)?;
    println!("alpha = {}, beta = {}, L = {:.15}, p = {}", p.alpha, p.beta, p.l, p.p);
    println!("U(0) = {}, U(L/2) = {:.15}, U(L) = {}", p.evaluate(0.0), p.evaluate(0.5 * p.l), p.evaluate(p.l));
    let s = p.sample(33)?;
    let mut out = Vec::new();
    s.write_csv(&mut out)?;
    print!("{}", String::from_utf8_lossy(&out));
    Ok(())
}
