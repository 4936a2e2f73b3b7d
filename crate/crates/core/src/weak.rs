//! Weak-solution checks for compacton profiles.
//!
//! A profile `U` supported on `[−L, L]` is a weak travelling-wave solution
//! of K(m,n) when
//!
//! ```text
//! ∫ (−gU + aU^m) φ' + b U^n φ''' dξ = 0
//! ```
//!
//! for every smooth compactly supported `φ`, and of KP(m,n) when the same
//! holds with `φ''` and `φ''''`. The integrals are evaluated here for a
//! battery of bump functions, together with the one-sided boundary
//! quantities `A₁…A₄` that must vanish at the cutoff.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::NumericCompacton;
use crate::profile::{ClosedFormProfile, EquationKind, EquationParams};
use crate::quadrature::{integrate_panels, TanhSinh};

/// Anything that can be evaluated as a profile `U(ξ)`, zero for `|ξ| ≥ L`.
pub trait ProfileFn {
    fn u(&self, xi: f64) -> f64;
    fn half_width(&self) -> f64;
}

impl ProfileFn for ClosedFormProfile {
    fn u(&self, xi: f64) -> f64 {
        self.evaluate(xi)
    }
    fn half_width(&self) -> f64 {
        self.l
    }
}

impl ProfileFn for NumericCompacton {
    fn u(&self, xi: f64) -> f64 {
        self.u_at(xi)
    }
    fn half_width(&self) -> f64 {
        self.l_shoot
    }
}

/// A profile given by a closure.
pub struct FnProfile<F> {
    pub f: F,
    pub l: f64,
}

impl<F: Fn(f64) -> f64> ProfileFn for FnProfile<F> {
    fn u(&self, xi: f64) -> f64 {
        if xi.abs() < self.l {
            (self.f)(xi)
        } else {
            0.0
        }
    }
    fn half_width(&self) -> f64 {
        self.l
    }
}

/// `inner` forced to zero for `|ξ| ≥ cut`, used to build profiles with a
/// wrong cutoff.
pub struct Truncated<'a, P: ?Sized> {
    pub inner: &'a P,
    pub cut: f64,
}

impl<P: ProfileFn + ?Sized> ProfileFn for Truncated<'_, P> {
    fn u(&self, xi: f64) -> f64 {
        if xi.abs() < self.cut {
            self.inner.u(xi)
        } else {
            0.0
        }
    }
    fn half_width(&self) -> f64 {
        self.cut
    }
}

/// `inner − level`, clipped at zero, with the support ending where the two
/// meet. The result reaches zero with a nonzero slope.
pub struct Lowered<'a, P: ?Sized> {
    pub inner: &'a P,
    pub level: f64,
    pub cut: f64,
}

impl<'a, P: ProfileFn + ?Sized> Lowered<'a, P> {
    /// Lower a single-hump profile by `fraction·U(0)`; the new cutoff is
    /// located by bisection on `[0, L]`.
    pub fn new(inner: &'a P, fraction: f64) -> Self {
        let level = fraction * inner.u(0.0);
        let (mut lo, mut hi) = (0.0, inner.half_width());
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if inner.u(mid) > level {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Lowered { inner, level, cut: lo }
    }
}

impl<P: ProfileFn + ?Sized> ProfileFn for Lowered<'_, P> {
    fn u(&self, xi: f64) -> f64 {
        if xi.abs() < self.cut {
            (self.inner.u(xi) - self.level).max(0.0)
        } else {
            0.0
        }
    }
    fn half_width(&self) -> f64 {
        self.cut
    }
}

/// Test functions usable in the weak forms.
pub trait TestFn {
    /// `d^order φ / dξ^order`, for `order ≤ 4`.
    fn derivative(&self, xi: f64, order: usize) -> Result<f64>;
    /// Closed support interval.
    fn support(&self) -> (f64, f64);
    /// Points where `φ` fails to be analytic.
    fn breakpoints(&self) -> Vec<f64> {
        let (lo, hi) = self.support();
        vec![lo, hi]
    }
}

/// `φ(ξ) = (ξ−c)^d · exp(−1/(1−((ξ−c)/w)²))` on `|ξ−c| < w`, zero outside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestFunction {
    pub center: f64,
    pub width: f64,
    pub degree: u32,
}

/// Numerators `P_k` of `ψ^{(k)}(s) = P_k(s) (1−s²)^{−2k} ψ(s)` for
/// `ψ = exp(−1/(1−s²))`, coefficients in increasing powers of `s`.
fn bump_numerators() -> [Vec<f64>; 5] {
    fn mul(p: &[f64], q: &[f64]) -> Vec<f64> {
        let mut r = vec![0.0; p.len() + q.len() - 1];
        for (i, a) in p.iter().enumerate() {
            for (j, b) in q.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        r
    }
    fn add(p: &[f64], q: &[f64]) -> Vec<f64> {
        let mut r = vec![0.0; p.len().max(q.len())];
        for (i, a) in p.iter().enumerate() {
            r[i] += a;
        }
        for (i, b) in q.iter().enumerate() {
            r[i] += b;
        }
        r
    }
    let one_minus_sq = [1.0, 0.0, -1.0];
    let sq = mul(&one_minus_sq, &one_minus_sq);
    let mut out: [Vec<f64>; 5] = Default::default();
    out[0] = vec![1.0];
    for k in 0..4 {
        let p = &out[k];
        let dp: Vec<f64> = if p.len() > 1 {
            p.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect()
        } else {
            vec![0.0]
        };
        // P_{k+1} = (1−s²)² P_k' + (4k s(1−s²) − 2s) P_k
        let kf = k as f64;
        let factor = [0.0, 4.0 * kf - 2.0, 0.0, -4.0 * kf];
        out[k + 1] = add(&mul(&sq, &dp), &mul(&factor, p));
    }
    out
}

fn horner(p: &[f64], s: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * s + c)
}

impl TestFunction {
    pub fn new(center: f64, width: f64, degree: u32) -> Result<Self> {
        if !(width > 0.0) || !center.is_finite() || !width.is_finite() {
            return Err(Error::InvalidParams(format!(
                "test function needs a finite centre and positive width, got ({center}, {width})"
            )));
        }
        Ok(TestFunction { center, width, degree })
    }

    /// Derivatives `0..=order` of the bare bump `ψ((ξ−c)/w)` with respect to ξ.
    fn bump_derivatives(&self, s: f64, order: usize) -> [f64; 5] {
        thread_local! {
            static NUM: [Vec<f64>; 5] = bump_numerators();
        }
        let q = 1.0 - s * s;
        let mut out = [0.0; 5];
        if !(q > 0.0) {
            return out;
        }
        NUM.with(|num| {
            for k in 0..=order {
                // Combine the pole and the exponential in log space so that
                // neither overflows near the edge of the support.
                let mag = (-1.0 / q - 2.0 * k as f64 * q.ln()).exp();
                out[k] = horner(&num[k], s) * mag / self.width.powi(k as i32);
            }
        });
        out
    }
}

impl TestFn for TestFunction {
    fn derivative(&self, xi: f64, order: usize) -> Result<f64> {
        if order > 4 {
            return Err(Error::Domain(format!("test-function derivatives go up to order 4, got {order}")));
        }
        let t = xi - self.center;
        let s = t / self.width;
        if !(s.abs() < 1.0) {
            return Ok(0.0);
        }
        let psi = self.bump_derivatives(s, order);
        // Leibniz rule with the monomial t^d.
        let d = self.degree as usize;
        let mut sum = 0.0;
        let mut binom = 1.0;
        for i in 0..=order {
            let r = order - i;
            if r <= d {
                let falling: f64 = (0..r).map(|j| (d - j) as f64).product();
                sum += binom * falling * t.powi((d - r) as i32) * psi[i];
            }
            binom = binom * (order - i) as f64 / (i + 1) as f64;
        }
        Ok(sum)
    }

    fn support(&self) -> (f64, f64) {
        (self.center - self.width, self.center + self.width)
    }
}

/// `Σ cᵢ φᵢ`, for checking linearity of the residuals.
#[derive(Debug, Clone)]
pub struct Combination(pub Vec<(f64, TestFunction)>);

impl TestFn for Combination {
    fn derivative(&self, xi: f64, order: usize) -> Result<f64> {
        self.0.iter().try_fold(0.0, |acc, (c, tf)| Ok(acc + c * tf.derivative(xi, order)?))
    }
    fn support(&self) -> (f64, f64) {
        self.0.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, tf)| {
            let (a, b) = tf.support();
            (lo.min(a), hi.max(b))
        })
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.0.iter().flat_map(|(_, tf)| tf.breakpoints()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub value: f64,
    /// `∫ |b U^n φ'''|` (or `φ''''` for KP).
    pub scale: f64,
    pub error_estimate: f64,
}

impl Residual {
    pub fn scaled(&self) -> f64 {
        if self.scale > 0.0 {
            self.value.abs() / self.scale
        } else {
            self.value.abs()
        }
    }
}

fn residual<P, T>(profile: &P, params: &EquationParams, g: f64, tf: &T, kind: EquationKind) -> Result<Residual>
where
    P: ProfileFn + ?Sized,
    T: TestFn + ?Sized,
{
    let l = profile.half_width();
    let (lo, hi) = tf.support();
    let (lo, hi) = (lo.max(-l), hi.min(l));
    if !(lo < hi) {
        return Ok(Residual {
            value: 0.0,
            scale: 0.0,
            error_estimate: 0.0,
        });
    }
    let (low_order, high_order) = match kind {
        EquationKind::K => (1, 3),
        EquationKind::KP => (2, 4),
    };
    let EquationParams { m, n, a, b, .. } = *params;
    let mut breaks = vec![lo, hi];
    // Keep the profile centre and the bump midpoint as panel ends too.
    for x in tf.breakpoints().into_iter().chain([0.0, 0.5 * (lo + hi)]) {
        if x > lo && x < hi {
            breaks.push(x);
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    // Orders are at most 4 here, so derivative() cannot fail.
    let eval = |xi: f64, order: usize| tf.derivative(xi, order).unwrap_or(f64::NAN);
    let terms = |xi: f64| {
        let u = profile.u(xi);
        (
            (-g * u + a * u.powf(m)) * eval(xi, low_order),
            b * u.powf(n) * eval(xi, high_order),
        )
    };

    // L¹ norms only set the scale, so their own convergence is not checked.
    let rough = TanhSinh::new(1e-8, 0.0);
    let (mut scale, mut magnitude) = (0.0, 0.0);
    for w in breaks.windows(2) {
        scale += rough.integrate_unchecked(|nd| terms(nd.x).1.abs(), w[0], w[1]).value;
        magnitude += rough
            .integrate_unchecked(
                |nd| {
                    let (p, q) = terms(nd.x);
                    p.abs() + q.abs()
                },
                w[0],
                w[1],
            )
            .value;
    }

    let fine = TanhSinh::new(1e-12, 1e-12 * magnitude);
    let r = integrate_panels(
        &fine,
        |xi| {
            let (p, q) = terms(xi);
            p + q
        },
        &breaks,
        12,
    )?;
    Ok(Residual {
        value: r.value,
        scale,
        error_estimate: r.error_estimate,
    })
}

/// `∫ (−gU + aU^m) φ' + b U^n φ''' dξ`.
pub fn residual_k<P, T>(profile: &P, params: &EquationParams, g: f64, tf: &T) -> Result<Residual>
where
    P: ProfileFn + ?Sized,
    T: TestFn + ?Sized,
{
    residual(profile, params, g, tf, EquationKind::K)
}

/// `∫ (−gU + aU^m) φ'' + b U^n φ'''' dξ`.
pub fn residual_kp<P, T>(profile: &P, params: &EquationParams, g: f64, tf: &T) -> Result<Residual>
where
    P: ProfileFn + ?Sized,
    T: TestFn + ?Sized,
{
    residual(profile, params, g, tf, EquationKind::KP)
}

/// 25 bumps with centres spread over `[−1.5L, 1.5L]`, widths cycling through
/// `{0.3L, 0.6L, 1.2L}` and degrees through `{0, 1}`.
///
/// With a seed, centres move by up to a quarter of their spacing and widths
/// by up to 10%.
pub fn default_battery(l: f64, seed: Option<u64>) -> Vec<TestFunction> {
    const COUNT: usize = 25;
    let spacing = 3.0 * l / (COUNT - 1) as f64;
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    (0..COUNT)
        .map(|i| {
            let mut center = -1.5 * l + spacing * i as f64;
            let mut width = [0.3, 0.6, 1.2][i % 3] * l;
            if let Some(rng) = rng.as_mut() {
                center += rng.gen_range(-0.25..0.25) * spacing;
                width *= 1.0 + rng.gen_range(-0.1..0.1);
            }
            TestFunction {
                center,
                width,
                degree: (i % 2) as u32,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualEntry {
    pub test_function: TestFunction,
    pub residual: f64,
    pub scale: f64,
    pub scaled: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub equation: EquationKind,
    pub entries: Vec<ResidualEntry>,
    pub max_abs_scaled: f64,
    /// Largest quadrature error estimate, relative to the residual scale.
    pub quadrature_error_estimate: f64,
    pub threshold: f64,
    pub passed: bool,
}

/// Run `residual_k` or `residual_kp` over a battery.
pub fn verify<P>(
    profile: &P,
    params: &EquationParams,
    g: f64,
    battery: &[TestFunction],
    kind: EquationKind,
    threshold: f64,
) -> Result<ResidualReport>
where
    P: ProfileFn + ?Sized,
{
    let mut entries = Vec::with_capacity(battery.len());
    let mut max_scaled = 0.0f64;
    let mut max_err = 0.0f64;
    for tf in battery {
        let r = residual(profile, params, g, tf, kind)?;
        let scaled = r.scaled();
        max_scaled = max_scaled.max(scaled);
        if r.scale > 0.0 {
            max_err = max_err.max(r.error_estimate / r.scale);
        }
        entries.push(ResidualEntry {
            test_function: *tf,
            residual: r.value,
            scale: r.scale,
            scaled,
        });
    }
    Ok(ResidualReport {
        equation: kind,
        entries,
        max_abs_scaled: max_scaled,
        quadrature_error_estimate: max_err,
        threshold,
        passed: max_scaled < threshold,
    })
}

/// One-sided limits of the boundary quantities at `ξ → L⁻`:
/// `A₁ = bU^n`, `A₂ = b(U^n)'`, `A₃ = −gU + aU^m + b(U^n)''`,
/// `A₄ = (−gU + aU^m)' + b(U^n)'''`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryQuantities {
    pub a: [f64; 4],
    /// The same divided by `|b|U(0)^n / L^{i−1}`.
    pub scaled: [f64; 4],
}

/// Values and first three derivatives at `ξ = L` of the degree-6
/// interpolant through 7 samples on `[L−δ, L)`.
fn one_sided_derivatives(f: impl Fn(f64) -> f64, l: f64, delta: f64) -> [f64; 4] {
    const K: usize = 7;
    // Nodes t_j = −(j+1)/K in units of δ, strictly inside the support.
    let t: Vec<f64> = (0..K).map(|j| -((j + 1) as f64) / K as f64).collect();
    let mut coef: Vec<f64> = t.iter().map(|&tj| f(l + tj * delta)).collect();
    // Newton divided differences, then expand to monomials in t.
    for j in 1..K {
        for i in (j..K).rev() {
            coef[i] = (coef[i] - coef[i - 1]) / (t[i] - t[i - j]);
        }
    }
    let mut mono = vec![0.0; K];
    for i in (0..K).rev() {
        // mono ← mono·(t − t_i) + coef_i
        let mut next = vec![0.0; K];
        for k in 0..K - 1 {
            next[k + 1] += mono[k];
            next[k] -= t[i] * mono[k];
        }
        next[0] += coef[i];
        mono = next;
    }
    [mono[0], mono[1] / delta, 2.0 * mono[2] / delta.powi(2), 6.0 * mono[3] / delta.powi(3)]
}

pub fn boundary_quantities<P>(profile: &P, params: &EquationParams, g: f64, l: f64) -> BoundaryQuantities
where
    P: ProfileFn + ?Sized,
{
    let EquationParams { m, n, a, b, .. } = *params;
    let delta = 1e-3 * l;
    let w = one_sided_derivatives(|x| profile.u(x).powf(n), l, delta);
    let q = one_sided_derivatives(
        |x| {
            let u = profile.u(x);
            -g * u + a * u.powf(m)
        },
        l,
        delta,
    );
    let raw = [b * w[0], b * w[1], q[0] + b * w[2], q[1] + b * w[3]];
    let unit = (b * profile.u(0.0).powf(n)).abs();
    let mut scaled = [0.0; 4];
    for (i, (s, r)) in scaled.iter_mut().zip(raw).enumerate() {
        *s = if unit > 0.0 { r.abs() * l.powi(i as i32) / unit } else { r.abs() };
    }
    BoundaryQuantities { a: raw, scaled }
}

/// Slope of `log U` against `log(L−ξ)` over 50 points in `[0.95L, 0.999L]`.
pub fn endpoint_power_fit<P>(profile: &P, l: f64) -> Result<f64>
where
    P: ProfileFn + ?Sized,
{
    const COUNT: usize = 50;
    let mut xs = Vec::with_capacity(COUNT);
    let mut ys = Vec::with_capacity(COUNT);
    for i in 0..COUNT {
        let xi = l * (0.95 + 0.049 * i as f64 / (COUNT - 1) as f64);
        let u = profile.u(xi);
        if !(u > 0.0) {
            return Err(Error::Domain(format!("profile is not positive at xi = {xi} (U = {u})")));
        }
        xs.push((l - xi).ln());
        ys.push(u.ln());
    }
    let mx = xs.iter().sum::<f64>() / COUNT as f64;
    let my = ys.iter().sum::<f64>() / COUNT as f64;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}
