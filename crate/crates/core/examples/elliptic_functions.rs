//! Jacobi elliptic functions for real and imaginary modulus.
use compacton::elliptic::{complete_k, inverse_cn, jacobi, Modulus};

fn main() -> compacton::error::Result<()> {
    for k in [Modulus::real(0.0), Modulus::real(std::f64::consts::FRAC_1_SQRT_2), Modulus::imaginary(1.0)] {
        let kk = complete_k(k)?;
        println!("k = {k}: K = {kk:.15}");
        for z in [0.0, 0.5 * kk, kk] {
            let j = jacobi(z, k)?;
            println!("  z = {z:.6}  sn = {:+.15}  cn = {:+.15}  dn = {:+.15}", j.sn, j.cn, j.dn);
        }
        let z = inverse_cn(0.3, k)?;
        println!("  cn^-1(0.3) = {z:.15}, cn of that = {:.15}", jacobi(z, k)?.cn);
    }
    Ok(())
}
