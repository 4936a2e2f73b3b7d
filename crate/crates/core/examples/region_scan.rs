//! Existence flags across the free power, as plotted in region diagrams.
use compacton::existence::region_grid;
use compacton::profile::FamilyId;

fn main() -> compacton::error::Result<()> {
    let pts = region_grid(FamilyId::Cos1, 1.0, 4.0, 13)?;
    println!("   m      n   weak K strong K weak KP strong KP");
    for p in pts {
        let case = p.weak_kp_case.map_or("-".to_string(), |c| format!("case {c}"));
        println!("{:5.3} {:6.3} {:>8} {:>8} {:>7} {:>9}", p.m, p.n, p.weak_k, p.strong_k, case, p.strong_kp);
    }
    Ok(())
}
