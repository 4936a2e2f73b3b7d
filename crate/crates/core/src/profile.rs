//! Explicit symmetric compacton profiles.
//!
//! Every family has the shape
//!
//! ```text
//! U(ξ) = α · w(ξ)^e · H(L − |ξ|)
//! ```
//!
//! where `w` is a normalised inner function (a quadratic, a cosine, a Jacobi
//! cn or sn, or a rational function of cn) that is positive on `(−L, L)` and
//! vanishes at `±L`. The half-width `L` is always found by root finding on
//! `w`, never copied from a closed-form expression.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::elliptic::{complete_k, inverse_cn, jacobi, Modulus};
use crate::error::{Error, Result};
use crate::existence;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// `√2(√3−1)/4`, the smaller of the two rational-cn moduli.
pub const K_LOW: f64 = 0.258_819_045_102_520_74;
/// `√2(√3+1)/4`.
pub const K_HIGH: f64 = 0.965_925_826_289_068_3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum EquationKind {
    K,
    KP,
}

impl fmt::Display for EquationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EquationKind::K => "K",
            EquationKind::KP => "KP",
        })
    }
}

/// Powers and coefficients of `u_t + a(u^m)_x + b(u^n)_xxx = 0`, or of its
/// KP counterpart with transverse coefficient `sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquationParams {
    pub m: f64,
    pub n: f64,
    pub a: f64,
    pub b: f64,
    pub sigma: f64,
    pub kind: EquationKind,
}

impl EquationParams {
    pub fn k(m: f64, n: f64, a: f64, b: f64) -> Result<Self> {
        let p = EquationParams {
            m,
            n,
            a,
            b,
            sigma: 1.0,
            kind: EquationKind::K,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn kp(m: f64, n: f64, a: f64, b: f64, sigma: f64) -> Result<Self> {
        let p = EquationParams {
            m,
            n,
            a,
            b,
            sigma,
            kind: EquationKind::KP,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite = [self.m, self.n, self.a, self.b, self.sigma].iter().all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidParams("parameters must be finite".into()));
        }
        if self.m <= 0.0 || self.n <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "powers must be positive (m={}, n={})",
                self.m, self.n
            )));
        }
        if self.m == 1.0 {
            return Err(Error::InvalidParams("m = 1 is excluded".into()));
        }
        if self.a == 0.0 || self.b == 0.0 {
            return Err(Error::InvalidParams("a and b must be non-zero".into()));
        }
        if self.kind == EquationKind::KP && self.sigma * self.sigma != 1.0 {
            return Err(Error::InvalidParams(format!("sigma must be ±1, got {}", self.sigma)));
        }
        Ok(())
    }
}

/// Travelling-wave data. `g = c` for a K(m,n) wave and `g = ν − σμ²` for a
/// KP(m,n) line wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveSpec {
    pub c: Option<f64>,
    pub mu: Option<f64>,
    pub nu: Option<f64>,
    pub g: f64,
}

impl WaveSpec {
    pub fn speed(c: f64) -> Self {
        WaveSpec {
            c: Some(c),
            mu: None,
            nu: None,
            g: c,
        }
    }

    pub fn line(mu: f64, nu: f64, sigma: f64) -> Self {
        WaveSpec {
            c: None,
            mu: Some(mu),
            nu: Some(nu),
            g: nu - sigma * mu * mu,
        }
    }

    pub fn direct(g: f64) -> Self {
        WaveSpec {
            c: None,
            mu: None,
            nu: None,
            g,
        }
    }

    /// Direction angle `θ = arctan μ` of a line wave.
    pub fn theta(&self) -> Option<f64> {
        self.mu.map(f64::atan)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyId {
    Zsq1,
    Zsq2,
    Cos1,
    Cos2,
    Cn1,
    Cn2,
    Sn1,
    Sn2,
    Ratcn1,
    Ratcn2,
    Ratcn3,
    Ratcn4,
    Ratcn5,
    Ratcn6,
}

/// Sign pattern of `(a, b, g)` a family requires.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignPattern {
    AllEqual,
    BOpposite,
}

impl SignPattern {
    pub fn holds(self, a: f64, b: f64, g: f64) -> bool {
        let (sa, sb, sg) = (a.signum(), b.signum(), g.signum());
        match self {
            SignPattern::AllEqual => sa == sb && sb == sg,
            SignPattern::BOpposite => sa == sg && sb == -sg,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            SignPattern::AllEqual => "sgn(g)=sgn(a)=sgn(b)",
            SignPattern::BOpposite => "sgn(g)=sgn(a)=-sgn(b)",
        }
    }
}

impl FamilyId {
    pub const ALL: [FamilyId; 14] = [
        FamilyId::Zsq1,
        FamilyId::Zsq2,
        FamilyId::Cos1,
        FamilyId::Cos2,
        FamilyId::Cn1,
        FamilyId::Cn2,
        FamilyId::Sn1,
        FamilyId::Sn2,
        FamilyId::Ratcn1,
        FamilyId::Ratcn2,
        FamilyId::Ratcn3,
        FamilyId::Ratcn4,
        FamilyId::Ratcn5,
        FamilyId::Ratcn6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::Zsq1 => "zsq1",
            FamilyId::Zsq2 => "zsq2",
            FamilyId::Cos1 => "cos1",
            FamilyId::Cos2 => "cos2",
            FamilyId::Cn1 => "cn1",
            FamilyId::Cn2 => "cn2",
            FamilyId::Sn1 => "sn1",
            FamilyId::Sn2 => "sn2",
            FamilyId::Ratcn1 => "ratcn1",
            FamilyId::Ratcn2 => "ratcn2",
            FamilyId::Ratcn3 => "ratcn3",
            FamilyId::Ratcn4 => "ratcn4",
            FamilyId::Ratcn5 => "ratcn5",
            FamilyId::Ratcn6 => "ratcn6",
        }
    }

    /// Name of the free power: `m` for COS2 (where `n = 1`), `n` otherwise.
    pub fn free_var(self) -> &'static str {
        if self == FamilyId::Cos2 {
            "m"
        } else {
            "n"
        }
    }

    /// `(m, n)` as functions of the free power.
    pub fn powers(self, x: f64) -> (f64, f64) {
        use FamilyId::*;
        match self {
            Zsq1 => ((x + 1.0) / 2.0, x),
            Zsq2 => (2.0 - x, x),
            Cos1 => (x, x),
            Cos2 => (x, 1.0),
            Cn1 | Cn2 | Sn1 | Sn2 => (2.0 * x - 1.0, x),
            Ratcn1 | Ratcn2 | Ratcn3 => (3.0 * x - 2.0, x),
            Ratcn4 | Ratcn5 | Ratcn6 => ((3.0 * x - 1.0) / 2.0, x),
        }
    }

    /// Endpoint power `p` in `U ~ U₀ (L − |ξ|)^p`.
    pub fn endpoint_power(self, x: f64) -> f64 {
        use FamilyId::*;
        match self {
            Zsq1 | Cos1 | Cn2 | Sn2 | Ratcn1 | Ratcn2 | Ratcn6 => 2.0 / (x - 1.0),
            Zsq2 => 1.0 / (x - 1.0),
            Cos2 | Cn1 | Sn1 => 2.0 / (1.0 - x),
            Ratcn3 => 1.0 / (1.0 - x),
            Ratcn4 | Ratcn5 => 4.0 / (1.0 - x),
        }
    }

    pub fn sign_pattern(self) -> SignPattern {
        use FamilyId::*;
        match self {
            Zsq1 | Cos1 | Cn2 | Sn2 | Ratcn1 | Ratcn2 | Ratcn6 => SignPattern::AllEqual,
            Zsq2 | Cos2 | Cn1 | Sn1 | Ratcn3 | Ratcn4 | Ratcn5 => SignPattern::BOpposite,
        }
    }

    /// Families whose inner function touches zero quadratically at `±L`.
    fn double_zero(self) -> bool {
        matches!(
            self,
            FamilyId::Ratcn1 | FamilyId::Ratcn2 | FamilyId::Ratcn4 | FamilyId::Ratcn5
        )
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        FamilyId::ALL
            .iter()
            .copied()
            .find(|f| f.name() == lower)
            .ok_or_else(|| Error::InvalidParams(format!("unknown family '{s}'")))
    }
}

/// Normalised inner function, positive on `(0, L)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum Inner {
    /// `1 − βξ²`
    Quadratic,
    /// `cos βξ`
    Cos,
    /// `cn(βξ, k)`
    Cn,
    /// `sn(β(ξ + shift), k)`
    Sn,
    /// `orientation · (cn + κ)/(cn + γ)` at `β(ξ + shift)`
    Rational { orientation: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormProfile {
    pub family: FamilyId,
    pub params: EquationParams,
    pub g: f64,
    pub alpha: f64,
    pub beta: f64,
    pub modulus: Option<Modulus>,
    pub exponent: f64,
    pub shift: f64,
    pub rational_constants: Option<(f64, f64)>,
    #[serde(rename = "L")]
    pub l: f64,
    pub p: f64,
    inner: Inner,
}

fn pow_checked(family: FamilyId, what: &str, base: f64, e: f64) -> Result<f64> {
    let v = base.powf(e);
    if base <= 0.0 || !v.is_finite() || v <= 0.0 {
        return Err(Error::Rejected(format!(
            "{family}: {what} base {base} is not positive"
        )));
    }
    Ok(v)
}

/// Build a profile for `family` at free power `x` (n, or m for COS2).
pub fn construct(family: FamilyId, x: f64, a: f64, b: f64, g: f64) -> Result<ClosedFormProfile> {
    use FamilyId::*;
    if ![x, a, b, g].iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidParams("parameters must be finite".into()));
    }
    if a == 0.0 || b == 0.0 {
        return Err(Error::InvalidParams("a and b must be non-zero".into()));
    }
    if g == 0.0 {
        return Err(Error::InvalidParams(format!(
            "{family}: g = 0 is not admissible for an explicit compacton"
        )));
    }
    let range = existence::table1_intervals(family).weak_k;
    if !range.contains(x) {
        return Err(Error::OutOfRange {
            family: family.name(),
            var: family.free_var(),
            value: x,
            interval: range.to_string(),
        });
    }
    let pattern = family.sign_pattern();
    if !pattern.holds(a, b, g) {
        return Err(Error::SignCondition {
            family: family.name(),
            condition: pattern.describe(),
        });
    }

    let (m, n) = family.powers(x);
    let p = family.endpoint_power(x);
    let mut modulus = None;
    let mut shift = 0.0;
    let mut rational = None;

    let (alpha, beta, exponent, inner) = match family {
        Zsq1 => {
            let e = 2.0 / (n - 1.0);
            let alpha = pow_checked(family, "amplitude", g * (3.0 * n + 1.0) / (2.0 * a * (n + 1.0)), e)?;
            let beta = a * a * (n + 1.0) * (n - 1.0).powi(2) / (2.0 * g * b * n * (3.0 * n + 1.0).powi(2));
            (alpha, beta, e, Inner::Quadratic)
        }
        Zsq2 => {
            let e = 1.0 / (n - 1.0);
            let alpha = pow_checked(family, "amplitude", a * (n + 1.0) / (2.0 * g), e)?;
            let beta = -g * g * (n - 1.0).powi(2) / (a * b * n * (n + 1.0).powi(2));
            (alpha, beta, e, Inner::Quadratic)
        }
        Cos1 => {
            let e = 2.0 / (n - 1.0);
            let alpha = pow_checked(family, "amplitude", 2.0 * n * g / ((n + 1.0) * a), 1.0 / (n - 1.0))?;
            let beta = (n - 1.0) / (2.0 * n) * (a / b).sqrt();
            (alpha, beta, e, Inner::Cos)
        }
        Cos2 => {
            let e = 2.0 / (1.0 - m);
            let alpha = pow_checked(family, "amplitude", 2.0 * a / (g * (m + 1.0)), 1.0 / (1.0 - m))?;
            let beta = (-g / (4.0 * b)).sqrt() * (1.0 - m);
            (alpha, beta, e, Inner::Cos)
        }
        Cn1 | Cn2 | Sn1 | Sn2 => {
            let q = (g / (a * (3.0 * n - 1.0) * (n + 1.0))).powf(0.25);
            let (alpha, e) = if matches!(family, Cn1 | Sn1) {
                let base = a * (n + 1.0) / (g * (3.0 * n - 1.0));
                (pow_checked(family, "amplitude", base, 1.0 / (2.0 - 2.0 * n))?, 2.0 / (1.0 - n))
            } else {
                let base = g * (3.0 * n - 1.0) / (a * (n + 1.0));
                (pow_checked(family, "amplitude", base, 1.0 / (2.0 * n - 2.0))?, 2.0 / (n - 1.0))
            };
            let beta = match family {
                Cn1 => (1.0 - n) * (-a / (n * b)).sqrt() * q,
                Cn2 => (n - 1.0) * (a / (b * n)).sqrt() * q,
                Sn1 => (1.0 - n) * (-a / (2.0 * b * n)).sqrt() * q,
                _ => (n - 1.0) * (a / (2.0 * b * n)).sqrt() * q,
            };
            if matches!(family, Cn1 | Cn2) {
                modulus = Some(Modulus::real(FRAC_1_SQRT_2));
                (alpha, beta, e, Inner::Cn)
            } else {
                let k = Modulus::imaginary(1.0);
                modulus = Some(k);
                shift = complete_k(k)? / beta;
                (alpha, beta, e, Inner::Sn)
            }
        }
        Ratcn1 | Ratcn2 | Ratcn3 | Ratcn4 | Ratcn5 | Ratcn6 => {
            let c53 = 5.0 + 3.0 * SQRT3;
            let (base, e, beta6, k) = match family {
                Ratcn1 | Ratcn2 => (
                    c53 * g * (2.0 * n - 1.0) / (-2.0 * a * (n + 1.0)),
                    1.0 / (n - 1.0),
                    12.0 * SQRT3 * a * g * g / (b.powi(3) * n.powi(3) * (n + 1.0).powi(2) * (2.0 * n - 1.0)),
                    K_LOW,
                ),
                Ratcn3 => (
                    c53 * a * (n + 1.0) / (g * (2.0 * n - 1.0)),
                    1.0 / (1.0 - n),
                    -12.0 * SQRT3 * a * g * g / (b.powi(3) * n.powi(3) * (n + 1.0).powi(2) * (2.0 * n - 1.0)),
                    K_HIGH,
                ),
                Ratcn4 | Ratcn5 => (
                    c53 * a * (n + 1.0) / (-2.0 * g * (5.0 * n - 1.0)),
                    2.0 / (1.0 - n),
                    -3.0 * SQRT3 * a * a * g
                        / (2.0 * b.powi(3) * n.powi(3) * (n + 1.0) * (5.0 * n - 1.0).powi(2)),
                    K_LOW,
                ),
                _ => (
                    c53 * g * (5.0 * n - 1.0) / (a * (n + 1.0)),
                    2.0 / (n - 1.0),
                    3.0 * SQRT3 * a * a * g / (2.0 * b.powi(3) * n.powi(3) * (n + 1.0) * (5.0 * n - 1.0).powi(2)),
                    K_HIGH,
                ),
            };
            let beta = (n - 1.0).abs() * pow_checked(family, "argument scale", beta6, 1.0 / 6.0)?;
            let (kappa, gamma) = match family {
                Ratcn1 | Ratcn4 => (-1.0, SQRT3 + 2.0),
                Ratcn2 | Ratcn5 => (1.0, -SQRT3 - 2.0),
                _ => (SQRT3 - 2.0, 1.0),
            };
            let cfac = base.cbrt();
            // (cn+κ)/(cn+γ) at the centre; the product with the cube-root
            // factor must be positive for a real profile.
            let r0 = if matches!(family, Ratcn1 | Ratcn4) {
                (-1.0 + kappa) / (-1.0 + gamma)
            } else {
                (1.0 + kappa) / (1.0 + gamma)
            };
            if !(cfac * r0 > 0.0) {
                return Err(Error::Rejected(format!("{family}: profile is not positive at the centre")));
            }
            let orientation = r0.signum();
            let km = Modulus::real(k);
            modulus = Some(km);
            rational = Some((kappa, gamma));
            if matches!(family, Ratcn1 | Ratcn4) {
                shift = 2.0 * complete_k(km)? / beta;
            }
            let alpha = pow_checked(family, "amplitude", cfac.abs(), e)?;
            (alpha, beta, e, Inner::Rational { orientation })
        }
    };

    if !(beta > 0.0 && beta.is_finite() && alpha.is_finite()) {
        return Err(Error::Rejected(format!(
            "{family}: constants are not real (alpha={alpha}, beta={beta})"
        )));
    }

    let mut profile = ClosedFormProfile {
        family,
        params: EquationParams {
            m,
            n,
            a,
            b,
            sigma: 1.0,
            kind: EquationKind::K,
        },
        g,
        alpha,
        beta,
        modulus,
        exponent,
        shift,
        rational_constants: rational,
        l: f64::INFINITY,
        p,
        inner,
    };
    profile.l = profile.first_zero()?;
    Ok(profile)
}

impl ClosedFormProfile {
    /// Free power the profile was built with (n, or m for COS2).
    pub fn free_power(&self) -> f64 {
        if self.family == FamilyId::Cos2 {
            self.params.m
        } else {
            self.params.n
        }
    }

    fn jac(&self, z: f64) -> crate::elliptic::Jacobi {
        // Modulus was validated at construction.
        jacobi(z, self.modulus.expect("elliptic family")).expect("valid modulus")
    }

    /// Inner function and its ξ-derivative, without the cutoff.
    pub fn inner(&self, xi: f64) -> (f64, f64) {
        let bt = self.beta;
        match self.inner {
            Inner::Quadratic => (1.0 - bt * xi * xi, -2.0 * bt * xi),
            Inner::Cos => ((bt * xi).cos(), -bt * (bt * xi).sin()),
            Inner::Cn => {
                let j = self.jac(bt * xi);
                (j.cn, -bt * j.sn * j.dn)
            }
            Inner::Sn => {
                // sn(u + K) = cn(u)/dn(u), which keeps the argument small.
                let j = self.jac(bt * xi);
                let w = j.cn / j.dn;
                let k2 = self.modulus.expect("elliptic family").parameter();
                (w, -bt * (1.0 - k2) * j.sn / (j.dn * j.dn))
            }
            Inner::Rational { orientation } => {
                let (kappa, gamma) = self.rational_constants.expect("rational family");
                let j = self.jac(bt * (xi + self.shift));
                // cn ± 1 through sn² to avoid cancellation at the double zero.
                let num = if kappa == -1.0 && j.cn > 0.0 {
                    -j.sn * j.sn / (1.0 + j.cn)
                } else if kappa == 1.0 && j.cn < 0.0 {
                    j.sn * j.sn / (1.0 - j.cn)
                } else {
                    j.cn + kappa
                };
                let den = j.cn + gamma;
                let dw = -bt * j.sn * j.dn;
                (orientation * num / den, orientation * (gamma - kappa) / (den * den) * dw)
            }
        }
    }

    /// A natural length scale used to bound the root search.
    fn quarter_period(&self) -> Result<f64> {
        Ok(match self.inner {
            Inner::Quadratic => 1.0 / self.beta.sqrt(),
            Inner::Cos => PI / (2.0 * self.beta),
            _ => complete_k(self.modulus.expect("elliptic family"))? / self.beta,
        })
    }

    /// Smallest `ξ > 0` where the uncut inner function reaches zero.
    pub fn first_zero(&self) -> Result<f64> {
        let q = self.quarter_period()?;
        let steps = 640;
        let dx = 10.0 * q / steps as f64;
        let double = self.family.double_zero();
        let w0 = self.inner(0.0).0;
        let (mut x_prev, (mut w_prev, mut d_prev)) = (0.0, self.inner(0.0));
        for i in 1..=steps {
            let x = i as f64 * dx;
            let (w, d) = self.inner(x);
            if !double && w_prev > 0.0 && w <= 0.0 {
                return Ok(bisect(|t| self.inner(t).0, x_prev, x));
            }
            if double && d_prev < 0.0 && d >= 0.0 && x_prev > 0.0 {
                let xm = bisect(|t| self.inner(t).1, x_prev, x);
                if self.inner(xm).0.abs() <= 1e-9 * w0.abs() {
                    return Ok(xm);
                }
            }
            x_prev = x;
            w_prev = w;
            d_prev = d;
        }
        Err(Error::Internal(format!(
            "{}: no zero of the inner function within ten quarter periods",
            self.family
        )))
    }

    /// `U(ξ)·H(L − |ξ|)`.
    pub fn evaluate(&self, xi: f64) -> f64 {
        let x = xi.abs();
        if !(x < self.l) {
            return 0.0;
        }
        let w = self.inner(x).0;
        if w <= 0.0 {
            return 0.0;
        }
        self.alpha * w.powf(self.exponent)
    }

    /// Amplitude `U₀` in `U ~ U₀ (L − |ξ|)^p` near the cutoff.
    pub fn endpoint_amplitude(&self) -> f64 {
        let slope = match (self.family.double_zero(), self.rational_constants) {
            // At a double zero sn = 0 and cn = -κ, so w ≈ ½β²/|γ−κ| (L−ξ)².
            (true, Some((kappa, gamma))) => 0.5 * self.beta * self.beta / (gamma - kappa).abs(),
            _ => self.inner(self.l).1.abs(),
        };
        self.alpha * slope.powf(self.exponent)
    }

    /// Half-width given by the closed-form expression printed alongside each
    /// family. Kept only as a cross-check against [`first_zero`](Self::first_zero).
    pub fn printed_half_width(&self) -> Result<f64> {
        use FamilyId::*;
        let EquationParams { m, n, a, b, .. } = self.params;
        let g = self.g;
        let s3 = SQRT3;
        let kl = complete_k(Modulus::real(K_LOW))?;
        let arccn = inverse_cn(s3 - 2.0, Modulus::real(K_HIGH))?;
        let q4 = ((3.0 * n - 1.0) * (n + 1.0) / (a * g)).powf(0.25);
        Ok(match self.family {
            Zsq1 => (3.0 * n + 1.0) / ((n - 1.0) * a.abs()) * (2.0 * n * (g * b).abs() / (n + 1.0)).sqrt(),
            Zsq2 => (n + 1.0) * (n * (a * b).abs()).sqrt() / ((n - 1.0) * g.abs()),
            Cos1 => n / (n - 1.0) * (b / a).sqrt() * PI,
            Cos2 => 1.0 / (1.0 - m) * (g.abs() / b.abs()).sqrt() * PI,
            Cn1 => (n * b.abs()).sqrt() / (1.0 - n) * q4 * complete_k(Modulus::real(FRAC_1_SQRT_2))?,
            Cn2 => (n * b.abs()).sqrt() / (n - 1.0) * q4 * complete_k(Modulus::real(FRAC_1_SQRT_2))?,
            Sn1 => (2.0 * n * b.abs()).sqrt() / (1.0 - n) * q4 * complete_k(Modulus::imaginary(1.0))?,
            Sn2 => (2.0 * n * b.abs()).sqrt() / (n - 1.0) * q4 * complete_k(Modulus::imaginary(1.0))?,
            Ratcn1 | Ratcn2 => {
                let r = (b.powi(3) * n.powi(3) * (n + 1.0).powi(2) * (2.0 * n - 1.0) / (12.0 * s3 * a * g * g))
                    .powf(1.0 / 6.0);
                2.0 / (n - 1.0) * r * kl
            }
            Ratcn3 => {
                let r = (b.abs().powi(3) * n.powi(3) * (n + 1.0).powi(2) * (2.0 * n - 1.0)
                    / (12.0 * s3 * a.abs() * g * g))
                    .powf(1.0 / 6.0);
                1.0 / (1.0 - n) * r * arccn
            }
            Ratcn4 | Ratcn5 => {
                let r = (2.0 * b.abs().powi(3) * n.powi(3) * (n + 1.0) * (5.0 * n - 1.0).powi(2)
                    / (3.0 * s3 * a * a * g.abs()))
                .powf(1.0 / 6.0);
                2.0 / (1.0 - n) * r * kl
            }
            Ratcn6 => {
                let r = (2.0 * b.abs().powi(3) * n.powi(3) * (n + 1.0) * (5.0 * n - 1.0).powi(2)
                    / (3.0 * s3 * a * a * g.abs()))
                .powf(1.0 / 6.0);
                1.0 / (n - 1.0) * r * arccn
            }
        })
    }

    /// Relative residual of `−gU + aU^m + b(U^n)″ = 0` at `xi`, with the
    /// second derivative taken by central differences of step `h`.
    pub fn strong_residual(&self, xi: f64, h: f64) -> f64 {
        let EquationParams { m, n, a, b, .. } = self.params;
        let u = self.evaluate(xi);
        let un = |x: f64| self.evaluate(x).powf(n);
        // Use the spacings actually represented in floating point.
        let (xp, xm) = (xi + h, xi - h);
        let (hp, hm) = (xp - xi, xi - xm);
        let u0 = un(xi);
        let d2 = 2.0 * ((un(xp) - u0) / hp - (u0 - un(xm)) / hm) / (hp + hm);
        let terms = [-self.g * u, a * u.powf(m), b * d2];
        let scale: f64 = terms.iter().map(|t| t.abs()).sum();
        if scale == 0.0 {
            return 0.0;
        }
        terms.iter().sum::<f64>().abs() / scale
    }

    pub fn sample(&self, count: usize) -> Result<SampledProfile> {
        if count < 16 {
            return Err(Error::InvalidParams(format!(
                "sample count must be at least 16, got {count}"
            )));
        }
        let pad = (count / 10) as i64;
        let last = (count - 1) as f64;
        let xi: Vec<f64> = (-pad..count as i64 + pad)
            .map(|i| self.l * (2.0 * i as f64 - last) / last)
            .collect();
        let u = xi.iter().map(|&x| self.evaluate(x)).collect();
        Ok(SampledProfile {
            profile: *self,
            xi,
            u,
        })
    }
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi.abs() {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// A profile sampled on a uniform grid that contains `±L` exactly.
#[derive(Debug, Clone, Serialize)]
pub struct SampledProfile {
    pub profile: ClosedFormProfile,
    pub xi: Vec<f64>,
    #[serde(rename = "U")]
    pub u: Vec<f64>,
}

impl SampledProfile {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["xi", "U"])?;
        for (x, u) in self.xi.iter().zip(&self.u) {
            wr.write_record([format!("{x:.17e}"), format!("{u:.17e}")])?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "family": self.profile.family,
            "params": self.profile.params,
            "g": self.profile.g,
            "alpha": self.profile.alpha,
            "beta": self.profile.beta,
            "modulus": self.profile.modulus,
            "exponent": self.profile.exponent,
            "shift": self.profile.shift,
            "rational_constants": self.profile.rational_constants,
            "L": self.profile.l,
            "p": self.profile.p,
            "xi": self.xi,
            "U": self.u,
        })
    }
}
