//! Complete elliptic integral of the first kind and the Jacobi elliptic
//! functions sn, cn, dn.
//!
//! The modulus follows the Maple convention: the stored value is `k`, the
//! square root of the parameter `m = k²` used by Abramowitz & Stegun and
//! most numerical libraries.
//!
//! Purely imaginary moduli `iκ` are supported through the transformations
//!
//! ```text
//! sn(z, iκ) = sn(sz, κ/s) / (s·dn(sz, κ/s))
//! cn(z, iκ) = cn(sz, κ/s) / dn(sz, κ/s)
//! dn(z, iκ) = 1 / dn(sz, κ/s)              with s = √(1 + κ²)
//! ```
//!
//! so no complex arithmetic is ever needed.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Landen/AGM iteration stops once `c_i / a_i` drops below this.
const AGM_TOL: f64 = 1e-14;
const AGM_MAX_DEPTH: usize = 40;

/// Jacobi modulus, real (`0 ≤ k < 1`) or purely imaginary (`i·κ`, any `κ ≥ 0`).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Modulus {
    pub value: f64,
    pub is_imaginary: bool,
}

impl Modulus {
    pub const fn real(k: f64) -> Self {
        Modulus {
            value: k,
            is_imaginary: false,
        }
    }

    pub const fn imaginary(kappa: f64) -> Self {
        Modulus {
            value: kappa,
            is_imaginary: true,
        }
    }

    /// `k²` as a signed parameter (negative for imaginary moduli).
    pub fn parameter(&self) -> f64 {
        if self.is_imaginary {
            -self.value * self.value
        } else {
            self.value * self.value
        }
    }

    fn check(&self) -> Result<()> {
        if !self.value.is_finite() || self.value < 0.0 {
            return Err(Error::Domain(format!(
                "modulus must be a finite non-negative number, got {}",
                self.value
            )));
        }
        if !self.is_imaginary && self.value >= 1.0 {
            return Err(Error::Domain(format!(
                "real modulus must satisfy k < 1, got {}",
                self.value
            )));
        }
        Ok(())
    }

    /// Scale factor `s = √(1+κ²)` and real modulus `κ/s` of the imaginary
    /// modulus transformation.
    fn reduce_imaginary(&self) -> (f64, f64) {
        let s = (1.0 + self.value * self.value).sqrt();
        (s, self.value / s)
    }
}

impl std::fmt::Display for Modulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_imaginary {
            write!(f, "{}i", self.value)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

/// Arithmetic-geometric mean of two non-negative numbers.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..AGM_MAX_DEPTH {
        if (a - b).abs() <= AGM_TOL * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

fn complete_k_real(k: f64) -> f64 {
    PI / (2.0 * agm(1.0, (1.0 - k * k).sqrt()))
}

/// Complete elliptic integral of the first kind, `K(k)`.
///
/// For an imaginary modulus `iκ` this returns `K(κ/s)/s` with `s = √(1+κ²)`,
/// the quarter period of `sn(·, iκ)`.
pub fn complete_k(k: Modulus) -> Result<f64> {
    k.check()?;
    if k.is_imaginary {
        let (s, kr) = k.reduce_imaginary();
        Ok(complete_k_real(kr) / s)
    } else {
        Ok(complete_k_real(k.value))
    }
}

/// Values of the three Jacobi functions at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobi {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Descending Landen (AGM) evaluation for `0 ≤ k < 1`.
fn jacobi_real(z: f64, k: f64) -> Jacobi {
    if k == 0.0 {
        let (s, c) = z.sin_cos();
        return Jacobi { sn: s, cn: c, dn: 1.0 };
    }

    let mut a = [0.0f64; AGM_MAX_DEPTH + 1];
    let mut c = [0.0f64; AGM_MAX_DEPTH + 1];
    a[0] = 1.0;
    c[0] = k;
    let mut b = (1.0 - k * k).sqrt();
    let mut depth = 0;
    while depth < AGM_MAX_DEPTH && c[depth].abs() > AGM_TOL * a[depth] {
        a[depth + 1] = 0.5 * (a[depth] + b);
        c[depth + 1] = 0.5 * (a[depth] - b);
        b = (a[depth] * b).sqrt();
        depth += 1;
    }

    // Reduce the argument modulo the real period 4K before amplifying it.
    let quarter = PI / (2.0 * a[depth]);
    let period = 4.0 * quarter;
    let zr = z - period * (z / period).round();

    let mut phi = (1u64 << depth) as f64 * a[depth] * zr;
    for i in (1..=depth).rev() {
        phi = 0.5 * (phi + (c[i] / a[i] * phi.sin()).asin());
    }
    let (sn, cn) = phi.sin_cos();
    // dn² = k'² + k²cn² has no cancellation, unlike cos φ0 / cos(φ1 - φ0)
    // which degenerates to 0/0 at the quarter period.
    let kc2 = (1.0 - k) * (1.0 + k);
    let dn = (kc2 + k * k * cn * cn).sqrt();
    Jacobi { sn, cn, dn }
}

/// `sn`, `cn`, `dn` at a real argument.
pub fn jacobi(z: f64, k: Modulus) -> Result<Jacobi> {
    k.check()?;
    if !z.is_finite() {
        return Err(Error::Domain(format!("argument must be finite, got {z}")));
    }
    if !k.is_imaginary {
        return Ok(jacobi_real(z, k.value));
    }
    let (s, kr) = k.reduce_imaginary();
    let j = jacobi_real(s * z, kr);
    Ok(Jacobi {
        sn: j.sn / (s * j.dn),
        cn: j.cn / j.dn,
        dn: 1.0 / j.dn,
    })
}

/// Principal inverse of `cn` on `[0, 2K]`.
///
/// `cn` falls monotonically from 1 at 0 to -1 at 2K, so a safeguarded
/// Newton iteration on that bracket always converges.
pub fn inverse_cn(x: f64, k: Modulus) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("inverse_cn needs |x| <= 1, got {x}")));
    }
    let half_period = 2.0 * complete_k(k)?;
    if x == 1.0 {
        return Ok(0.0);
    }
    if x == -1.0 {
        return Ok(half_period);
    }

    let (mut lo, mut hi) = (0.0, half_period);
    // Linear start guess between the endpoints.
    let mut z = 0.5 * (1.0 - x) * half_period;
    for _ in 0..200 {
        let j = jacobi(z, k)?;
        let f = j.cn - x;
        if f > 0.0 {
            lo = z;
        } else {
            hi = z;
        }
        let slope = -j.sn * j.dn;
        let mut next = if slope != 0.0 { z - f / slope } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - z).abs() <= 4.0 * f64::EPSILON * half_period || hi - lo <= f64::EPSILON * half_period
        {
            return Ok(next);
        }
        z = next;
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    // Reference values below were computed with mpmath at 40 digits.
    const K_INV_SQRT2: f64 = 1.854_074_677_301_372;
    const K_06: f64 = 1.750_753_802_915_753;
    const K_I: f64 = 1.311_028_777_146_06;

    #[test]
    fn complete_k_reference_values() {
        assert_abs_diff_eq!(complete_k(Modulus::real(0.0)).unwrap(), PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            complete_k(Modulus::real(0.5f64.sqrt())).unwrap(),
            K_INV_SQRT2,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(complete_k(Modulus::real(0.6)).unwrap(), K_06, epsilon = 1e-14);
        assert_abs_diff_eq!(complete_k(Modulus::imaginary(1.0)).unwrap(), K_I, epsilon = 1e-14);
    }

    #[test]
    fn complete_k_rejects_unit_modulus() {
        assert!(matches!(complete_k(Modulus::real(1.0)), Err(Error::Domain(_))));
        assert!(complete_k(Modulus::real(-0.1)).is_err());
    }

    #[test]
    fn degenerate_and_origin_values() {
        let j = jacobi(0.7, Modulus::real(0.0)).unwrap();
        assert_abs_diff_eq!(j.sn, 0.7f64.sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(j.cn, 0.7f64.cos(), epsilon = 1e-15);
        assert_eq!(j.dn, 1.0);

        for k in [Modulus::real(0.3), Modulus::real(0.99), Modulus::imaginary(1.5)] {
            let j = jacobi(0.0, k).unwrap();
            assert_abs_diff_eq!(j.sn, 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(j.cn, 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(j.dn, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn quarter_period_values() {
        let k = Modulus::real(0.6);
        let j = jacobi(K_06, k).unwrap();
        assert_abs_diff_eq!(j.sn, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(j.cn, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(j.dn, 0.64f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn mpmath_spot_values() {
        // mpmath.ellipfun('sn'|'cn'|'dn', 1.3, m=0.49)
        let j = jacobi(1.3, Modulus::real(0.7)).unwrap();
        assert_abs_diff_eq!(j.sn, 0.921_467_222_511_419_8, epsilon = 1e-13);
        assert_abs_diff_eq!(j.cn, 0.388_456_120_864_492_8, epsilon = 1e-13);
        assert_abs_diff_eq!(j.dn, 0.764_159_732_870_146_6, epsilon = 1e-13);
        // m = -1, i.e. modulus i
        let j = jacobi(0.3, Modulus::imaginary(1.0)).unwrap();
        assert_abs_diff_eq!(j.sn, 0.299_757_163_912_656_8, epsilon = 1e-13);
    }

    #[test]
    fn large_arguments_are_reduced() {
        let k = Modulus::real(0.8);
        let kk = complete_k(k).unwrap();
        let a = jacobi(0.37, k).unwrap();
        let b = jacobi(0.37 + 4.0 * kk * 25.0, k).unwrap();
        assert_abs_diff_eq!(a.sn, b.sn, epsilon = 1e-11);
        assert_abs_diff_eq!(a.cn, b.cn, epsilon = 1e-11);
    }

    #[test]
    fn inverse_cn_branch() {
        let k = Modulus::real(0.6);
        assert_eq!(inverse_cn(1.0, k).unwrap(), 0.0);
        assert_abs_diff_eq!(inverse_cn(0.0, k).unwrap(), K_06, epsilon = 1e-12);
        assert_abs_diff_eq!(inverse_cn(-1.0, k).unwrap(), 2.0 * K_06, epsilon = 1e-12);
        assert!(matches!(inverse_cn(1.2, k), Err(Error::Domain(_))));
    }

    #[test]
    fn inverse_cn_is_right_inverse() {
        for k in [Modulus::real(0.2588), Modulus::real(0.9659), Modulus::imaginary(0.8)] {
            for i in 0..=40 {
                let x = -1.0 + 2.0 * i as f64 / 40.0;
                let z = inverse_cn(x, k).unwrap();
                assert_abs_diff_eq!(jacobi(z, k).unwrap().cn, x, epsilon = 1e-10);
            }
        }
    }
}
