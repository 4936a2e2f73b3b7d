//! Existence intervals for all families, then a few individual verdicts.
use compacton::existence::{classify_family, table1, unit_coefficients, write_table1_csv};
use compacton::profile::FamilyId;

fn main() -> compacton::error::Result<()> {
    write_table1_csv(&table1(), std::io::stdout())?;
    println!();
    for (f, x) in [(FamilyId::Zsq1, 2.0), (FamilyId::Cos2, 0.25), (FamilyId::Cn1, 0.75), (FamilyId::Ratcn3, 0.7)] {
        let (a, b, g) = unit_coefficients(f);
        let r = classify_family(f, x, a, b, g);
        println!("{f} at {}={x}: p={:.4} weak K {} strong K {} weak KP {:?} strong KP {}", f.free_var(), r.p, r.weak_k, r.strong_k, r.weak_kp, r.strong_kp);
    }
    Ok(())
}
