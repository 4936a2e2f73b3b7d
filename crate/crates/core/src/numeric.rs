//! Symmetric compactons computed numerically from the reduced oscillator.
//!
//! With `V = U^n` the travelling-wave ODE has the first integral
//!
//! ```text
//! V'² = B V^{1+1/n} − A V^{1+m/n},   A = 2na/((m+n)b),  B = 2ng/((n+1)b)
//! ```
//!
//! (both integration constants zero for a compacton), and differentiating
//! it gives the oscillator `V'' = ½((1+1/n)B V^{1/n} − (1+m/n)A V^{m/n})`.
//! The crest sits at `V₀ = (B/A)^{n/(m−1)}`.
//!
//! [`shoot`] integrates the oscillator from the crest with Dormand–Prince
//! until `V` has dropped to a small fraction of `V₀`. Below that the
//! vector field is not Lipschitz, so the remaining descent to `V = 0` is
//! taken from the convergent series of the first integral instead of
//! stepping through the singular point.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ode::{Dopri5, Termination, Trajectory};
use crate::profile::EquationParams;
use crate::quadrature::TanhSinh;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedCoefficients {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

pub fn coefficients(params: &EquationParams, g: f64) -> Result<ReducedCoefficients> {
    params.validate()?;
    if g == 0.0 {
        return Err(Error::Rejected(
            "g = 0: the symmetric procedure needs B != 0".into(),
        ));
    }
    let EquationParams { m, n, a, b, .. } = *params;
    Ok(ReducedCoefficients {
        a: 2.0 * n * a / ((m + n) * b),
        b: 2.0 * n * g / ((n + 1.0) * b),
        e: 0.0,
        c: 0.0,
    })
}

/// `V₀ = (B/A)^{n/(m−1)}`.
pub fn center_amplitude(coeffs: &ReducedCoefficients, params: &EquationParams) -> Result<f64> {
    let ratio = coeffs.b / coeffs.a;
    if !(ratio > 0.0) {
        return Err(Error::Rejected(format!(
            "B/A = {ratio} is not positive: sgn(g) must equal sgn(a) for a positive crest"
        )));
    }
    Ok(ratio.powf(params.n / (params.m - 1.0)))
}

/// Whether `V''(0)` has the opposite sign to `V₀`, i.e.
/// `(1−m)/b · (g^{m−n}/a^{1−n})^{1/(m−1)} < 0`.
///
/// The bracket is evaluated literally when `a, g > 0`. For `a, g < 0` the
/// fractional powers are not real and the equivalent sign `(1−m)·B` of
/// `V''(0)/V₀` is used.
pub fn concavity_check(params: &EquationParams, g: f64) -> Result<bool> {
    let coeffs = coefficients(params, g)?;
    center_amplitude(&coeffs, params)?;
    let EquationParams { m, n, a, b, .. } = *params;
    if a > 0.0 && g > 0.0 {
        let bracket = (g.powf(m - n) / a.powf(1.0 - n)).powf(1.0 / (m - 1.0));
        Ok((1.0 - m) / b * bracket < 0.0)
    } else {
        Ok((1.0 - m) * coeffs.b < 0.0)
    }
}

/// `F(V) = D V^σ (1 − (V/V₀)^ρ)` factorisation of the right side of the
/// first integral, valid on `0 < V < V₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Factorisation {
    pub d: f64,
    pub sigma: f64,
    pub rho: f64,
}

impl Factorisation {
    fn new(coeffs: &ReducedCoefficients, params: &EquationParams) -> Result<Self> {
        let EquationParams { m, n, .. } = *params;
        let f = if m > 1.0 {
            Factorisation {
                d: coeffs.b,
                sigma: 1.0 + 1.0 / n,
                rho: (m - 1.0) / n,
            }
        } else {
            Factorisation {
                d: -coeffs.a,
                sigma: 1.0 + m / n,
                rho: (1.0 - m) / n,
            }
        };
        if !(f.d > 0.0) {
            return Err(Error::Rejected(
                "V'^2 is negative just below the crest: no symmetric compacton".into(),
            ));
        }
        if f.sigma >= 2.0 {
            return Err(Error::NonCompact(format!(
                "half-width integral diverges at V = 0 (V'^2 ~ V^{:.4}, exponent >= 2)",
                f.sigma
            )));
        }
        Ok(f)
    }

    /// Length scale `V₀^{1−σ/2}/√D` of the half-width integral.
    fn scale(&self, v0: f64) -> f64 {
        v0.powf(1.0 - 0.5 * self.sigma) / self.d.sqrt()
    }
}

/// `L = ∫₀^{V₀} dV / √(V'²(V))` by tanh-sinh quadrature.
///
/// With `u = V/V₀` the integrand is `u^{−σ/2}(1−u^ρ)^{−1/2}`, which for
/// small `ρ` varies over many decades of `u` near 0. The integral is taken
/// in `w = u^ρ` instead, where only algebraic endpoint factors remain:
/// `(1/ρ) w^{γ/ρ−1} (1−w)^{−1/2}` with `γ = 1 − σ/2`.
pub fn half_width_quadrature(coeffs: &ReducedCoefficients, params: &EquationParams, v0: f64) -> Result<f64> {
    if !(v0 > 0.0) {
        return Err(Error::Rejected(format!("V0 = {v0} is not positive")));
    }
    let f = Factorisation::new(coeffs, params)?;
    let power = (1.0 - 0.5 * f.sigma) / f.rho - 1.0;
    let rule = TanhSinh::new(1e-12, 0.0);
    let r = rule.integrate(
        |node| node.from_left.powf(power) / node.from_right.sqrt(),
        0.0,
        1.0,
    )?;
    Ok(f.scale(v0) * r.value / f.rho)
}

/// Which factor multiplies the right side of the oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ForceFactor {
    /// ½, obtained by differentiating the first integral.
    Half,
    /// 2, kept only to show that it breaks conservation of the first integral.
    Two,
}

impl ForceFactor {
    fn value(self) -> f64 {
        match self {
            ForceFactor::Half => 0.5,
            ForceFactor::Two => 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootOptions {
    pub rtol: f64,
    /// Absolute tolerance as a multiple of `V₀`.
    pub atol_scale: f64,
    /// Hand over to the tail series once `V < tail_fraction · V₀`.
    pub tail_fraction: f64,
    /// Grid points over `[−L, L]` (odd counts put a node at the crest).
    pub grid_points: usize,
    pub force: ForceFactor,
}

impl Default for ShootOptions {
    fn default() -> Self {
        ShootOptions {
            rtol: 1e-10,
            atol_scale: 1e-12,
            tail_fraction: 1e-2,
            grid_points: 2001,
            force: ForceFactor::Half,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootDiagnostics {
    pub steps: usize,
    pub rejected_steps: usize,
    pub rhs_evaluations: usize,
    /// Where the integrator handed over to the tail series.
    pub handover_xi: f64,
    pub handover_v: f64,
    /// Length covered by the tail series.
    pub tail_length: f64,
}

/// Tail of the first integral near `V = 0`:
/// `ξ(L) − ξ = s(u) = T Σ_j c_j u^{γ+jρ}/(γ+jρ)`, `c_j = C(2j,j)/4^j`.
#[derive(Debug, Clone, Copy)]
struct Tail {
    t: f64,
    gamma: f64,
    rho: f64,
    half_sigma: f64,
}

impl Tail {
    fn s(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        let ur = u.powf(self.rho);
        let mut c = 1.0;
        let mut pw = u.powf(self.gamma);
        let mut sum = 0.0;
        for j in 0..20_000 {
            let term = c * pw / (self.gamma + j as f64 * self.rho);
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
            c *= (2 * j + 1) as f64 / (2 * j + 2) as f64;
            pw *= ur;
        }
        self.t * sum
    }

    fn ds(&self, u: f64) -> f64 {
        self.t * u.powf(-self.half_sigma) / (1.0 - u.powf(self.rho)).sqrt()
    }

    /// Invert `s` on `(0, u_max]`.
    fn invert(&self, target: f64, u_max: f64) -> f64 {
        if target <= 0.0 {
            return 0.0;
        }
        let (mut lo, mut hi) = (0.0, u_max);
        let mut u = (self.gamma * target / self.t).powf(1.0 / self.gamma).min(u_max);
        for _ in 0..100 {
            let r = self.s(u) - target;
            if r > 0.0 {
                hi = u;
            } else {
                lo = u;
            }
            let mut next = u - r / self.ds(u);
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - u).abs() <= 1e-15 * u {
                return next;
            }
            u = next;
        }
        u
    }
}

#[derive(Debug, Clone)]
struct Composite {
    trajectory: Trajectory<2>,
    tail: Tail,
    handover_xi: f64,
    handover_u: f64,
    l: f64,
    v0: f64,
}

impl Composite {
    /// `(V, V')` at `|ξ|`; zero beyond the cutoff.
    fn eval(&self, xi: f64) -> (f64, f64) {
        let x = xi.abs();
        let sign = if xi < 0.0 { -1.0 } else { 1.0 };
        if x >= self.l {
            return (0.0, 0.0);
        }
        if x <= self.handover_xi {
            let y = self.trajectory.eval(x);
            return (y[0], sign * y[1]);
        }
        let u = self.tail.invert(self.l - x, self.handover_u);
        if u <= 0.0 {
            return (0.0, 0.0);
        }
        (self.v0 * u, -sign * self.v0 / self.tail.ds(u))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NumericCompacton {
    pub params: EquationParams,
    pub g: f64,
    pub coefficients: ReducedCoefficients,
    pub options: ShootOptions,
    pub grid: Vec<f64>,
    #[serde(rename = "V")]
    pub v: Vec<f64>,
    #[serde(rename = "V_prime")]
    pub v_prime: Vec<f64>,
    #[serde(rename = "U")]
    pub u: Vec<f64>,
    #[serde(rename = "V0")]
    pub v0: f64,
    #[serde(rename = "L_quadrature")]
    pub l_quadrature: f64,
    #[serde(rename = "L_shoot")]
    pub l_shoot: f64,
    /// Largest first-integral defect on the grid, unscaled.
    pub energy_residual_max: f64,
    /// `(|V|, |V'|, |V''|)` at the cutoff, unscaled.
    pub cutoff_residuals: [f64; 3],
    pub diagnostics: ShootDiagnostics,
    #[serde(skip)]
    solution: Composite,
}

/// Right side of the oscillator, with `V` clamped at zero.
fn force(coeffs: &ReducedCoefficients, params: &EquationParams, factor: f64, v: f64) -> f64 {
    let v = v.max(0.0);
    let EquationParams { m, n, .. } = *params;
    factor * ((1.0 + 1.0 / n) * coeffs.b * v.powf(1.0 / n) - (1.0 + m / n) * coeffs.a * v.powf(m / n))
}

/// Right side `B V^{1+1/n} − A V^{1+m/n}` of the first integral.
fn energy(coeffs: &ReducedCoefficients, params: &EquationParams, v: f64) -> f64 {
    let v = v.max(0.0);
    let EquationParams { m, n, .. } = *params;
    coeffs.b * v.powf(1.0 + 1.0 / n) - coeffs.a * v.powf(1.0 + m / n)
}

pub fn shoot(params: &EquationParams, g: f64, opts: &ShootOptions) -> Result<NumericCompacton> {
    if opts.grid_points < 3 {
        return Err(Error::InvalidParams("grid needs at least 3 points".into()));
    }
    let coeffs = coefficients(params, g)?;
    let v0 = center_amplitude(&coeffs, params)?;
    if !concavity_check(params, g)? {
        return Err(Error::Rejected(format!(
            "concavity test fails: V''(0) has the sign of V0 (m={}, n={}, a={}, b={}, g={g})",
            params.m, params.n, params.a, params.b
        )));
    }
    let l_quadrature = half_width_quadrature(&coeffs, params, v0)?;
    let fac = Factorisation::new(&coeffs, params)?;

    // Keep the tail series well inside its disc of convergence.
    let eps = opts.tail_fraction.min(0.5f64.powf(1.0 / fac.rho));
    let factor = opts.force.value();
    let ode = Dopri5::new(opts.rtol, opts.atol_scale * v0);
    let trajectory = ode.integrate(
        |_, y: &[f64; 2]| [y[1], force(&coeffs, params, factor, y[0])],
        0.0,
        [v0, 0.0],
        10.0 * l_quadrature,
        |_, y| y[0] - eps * v0,
        |t, y, _| (t > 0.0 && y[1] >= 0.0).then(|| format!("V turns back up at xi = {t:.6} before reaching zero")),
    )?;
    if trajectory.termination != Termination::Event {
        return Err(Error::NonCompact(format!(
            "V does not reach zero within 10 L = {:.6}",
            10.0 * l_quadrature
        )));
    }

    let tail = Tail {
        t: fac.scale(v0),
        gamma: 1.0 - 0.5 * fac.sigma,
        rho: fac.rho,
        half_sigma: 0.5 * fac.sigma,
    };
    let handover_xi = trajectory.t_final;
    let handover_v = trajectory.y_final[0];
    let handover_u = handover_v / v0;
    let tail_length = tail.s(handover_u);
    let l_shoot = handover_xi + tail_length;

    let diagnostics = ShootDiagnostics {
        steps: trajectory.steps.len(),
        rejected_steps: trajectory.rejected_steps,
        rhs_evaluations: trajectory.rhs_evaluations,
        handover_xi,
        handover_v,
        tail_length,
    };
    let solution = Composite {
        trajectory,
        tail,
        handover_xi,
        handover_u,
        l: l_shoot,
        v0,
    };

    let count = opts.grid_points;
    let last = (count - 1) as f64;
    let grid: Vec<f64> = (0..count).map(|i| l_shoot * (2.0 * i as f64 - last) / last).collect();
    let (v, v_prime): (Vec<f64>, Vec<f64>) = grid.iter().map(|&x| solution.eval(x)).unzip();
    let u = v.iter().map(|&x| x.max(0.0).powf(1.0 / params.n)).collect();

    let mut nc = NumericCompacton {
        params: *params,
        g,
        coefficients: coeffs,
        options: *opts,
        grid,
        v,
        v_prime,
        u,
        v0,
        l_quadrature,
        l_shoot,
        energy_residual_max: 0.0,
        cutoff_residuals: [0.0; 3],
        diagnostics,
        solution,
    };
    nc.energy_residual_max = energy_residual(&nc, &coeffs, params);
    nc.cutoff_residuals = nc.cutoff_at(l_shoot).iter().zip(nc.cutoff_at(l_quadrature)).map(|(a, b)| a.max(b)).collect::<Vec<_>>().try_into().expect("three entries");
    Ok(nc)
}

/// Largest `|V'² − B V^{1+1/n} + A V^{1+m/n}|` over the grid.
pub fn energy_residual(nc: &NumericCompacton, coeffs: &ReducedCoefficients, params: &EquationParams) -> f64 {
    nc.v
        .iter()
        .zip(&nc.v_prime)
        .map(|(&v, &vp)| (vp * vp - energy(coeffs, params, v)).abs())
        .fold(0.0, f64::max)
}

impl NumericCompacton {
    /// `(V, V')` anywhere on the real line.
    pub fn v_at(&self, xi: f64) -> (f64, f64) {
        self.solution.eval(xi)
    }

    /// `U = V^{1/n}` anywhere on the real line.
    pub fn u_at(&self, xi: f64) -> f64 {
        self.v_at(xi).0.max(0.0).powf(1.0 / self.params.n)
    }

    /// `V''` from the oscillator at the computed `V`.
    pub fn v_second_at(&self, xi: f64) -> f64 {
        let (v, _) = self.v_at(xi);
        if v <= 0.0 {
            return 0.0;
        }
        force(&self.coefficients, &self.params, self.options.force.value(), v)
    }

    fn cutoff_at(&self, xi: f64) -> [f64; 3] {
        let (v, vp) = self.v_at(xi);
        [v.abs(), vp.abs(), self.v_second_at(xi).abs()]
    }

    /// Scale `|B| V₀^{1+1/n}` of the first integral.
    pub fn energy_scale(&self) -> f64 {
        (self.coefficients.b * self.v0.powf(1.0 + 1.0 / self.params.n)).abs()
    }

    pub fn scaled_energy_residual(&self) -> f64 {
        self.energy_residual_max / self.energy_scale()
    }

    /// Cutoff residuals scaled by `V₀`, `V₀/L` and `V₀/L²`.
    pub fn scaled_cutoff_residuals(&self) -> [f64; 3] {
        let l = self.l_quadrature;
        let [a, b, c] = self.cutoff_residuals;
        [a / self.v0, b * l / self.v0, c * l * l / self.v0]
    }

    /// `V'''` at the cutoff from a second-order one-sided difference of
    /// `V''` with step `1e-5·L`, scaled by `V₀/L³`.
    pub fn scaled_third_derivative_at_cutoff(&self) -> f64 {
        let l = self.l_shoot;
        let h = 1e-5 * l;
        let f = |x: f64| self.v_second_at(x);
        let d3 = (3.0 * f(l) - 4.0 * f(l - h) + f(l - 2.0 * h)) / (2.0 * h);
        d3.abs() * l.powi(3) / self.v0
    }

    /// Relative gap between the shooting and quadrature half-widths.
    pub fn half_width_gap(&self) -> f64 {
        (self.l_shoot - self.l_quadrature).abs() / self.l_quadrature
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["xi", "V", "U"])?;
        for ((x, v), u) in self.grid.iter().zip(&self.v).zip(&self.u) {
            wr.write_record([format!("{x:.17e}"), format!("{v:.17e}"), format!("{u:.17e}")])?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "params": self.params,
            "g": self.g,
            "coefficients": self.coefficients,
            "options": self.options,
            "V0": self.v0,
            "L_quadrature": self.l_quadrature,
            "L_shoot": self.l_shoot,
            "energy_residual_max": self.energy_residual_max,
            "energy_residual_scaled": self.scaled_energy_residual(),
            "cutoff_residuals": self.cutoff_residuals,
            "cutoff_residuals_scaled": self.scaled_cutoff_residuals(),
            "diagnostics": self.diagnostics,
            "xi": self.grid,
            "V": self.v,
            "U": self.u,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn k(m: f64, n: f64, a: f64, b: f64) -> EquationParams {
        EquationParams::k(m, n, a, b).unwrap()
    }

    #[test]
    fn coefficient_examples() {
        let c = coefficients(&k(2.25, 2.0, 1.0, 1.0), 1.0).unwrap();
        assert_relative_eq!(c.b, 4.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(c.a, 16.0 / 17.0, max_relative = 1e-15);
        let c = coefficients(&k(2.0, 1.0, 1.0, 1.0), 1.0).unwrap();
        assert_relative_eq!(c.b, 1.0);
        assert_relative_eq!(c.a, 2.0 / 3.0, max_relative = 1e-15);
        let c1 = coefficients(&k(2.0, 1.0, -1.0, -1.0), 1.0).unwrap();
        assert_eq!(c1.a, c.a);
        assert!(coefficients(&k(2.0, 1.0, 1.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn center_amplitude_examples() {
        let p = k(2.25, 2.0, 1.0, 1.0);
        let v0 = center_amplitude(&coefficients(&p, 1.0).unwrap(), &p).unwrap();
        assert_relative_eq!(v0, (17.0f64 / 12.0).powf(1.6), max_relative = 1e-14);
        let p = k(0.5, 0.9, 1.0, -1.0);
        let v0 = center_amplitude(&coefficients(&p, 1.0).unwrap(), &p).unwrap();
        assert_relative_eq!(v0, (14.0f64 / 19.0).powf(-1.8), max_relative = 1e-14);
        let p = k(2.0, 2.0, 1.0, 1.0);
        assert!(center_amplitude(&coefficients(&p, -1.0).unwrap(), &p).is_err());
    }

    #[test]
    fn concavity_examples() {
        assert!(concavity_check(&k(2.25, 2.0, 1.0, 1.0), 1.0).unwrap());
        assert!(!concavity_check(&k(0.5, 2.0, 1.0, 1.0), 1.0).unwrap());
        assert!(concavity_check(&k(0.5, 0.9, 1.0, -1.0), 1.0).unwrap());
        // Negative a and g take the sign-analysis branch.
        assert!(concavity_check(&k(2.25, 2.0, -1.0, -1.0), -1.0).unwrap());
    }

    #[test]
    fn half_width_cos1() {
        let p = k(2.0, 2.0, 1.0, 1.0);
        let c = coefficients(&p, 1.0).unwrap();
        let v0 = center_amplitude(&c, &p).unwrap();
        assert_relative_eq!(half_width_quadrature(&c, &p, v0).unwrap(), 2.0 * PI, max_relative = 1e-11);
    }

    #[test]
    fn half_width_diverges_for_n_below_one_with_m_above_one() {
        let p = k(2.0, 0.8, 1.0, 1.0);
        let c = coefficients(&p, 1.0).unwrap();
        let v0 = center_amplitude(&c, &p).unwrap();
        assert!(matches!(half_width_quadrature(&c, &p, v0), Err(Error::NonCompact(_))));
    }

    #[test]
    fn tail_series_inverts() {
        let t = Tail {
            t: 1.3,
            gamma: 0.25,
            rho: 0.625,
            half_sigma: 0.75,
        };
        for u in [1e-12, 1e-8, 1e-5, 1e-3] {
            let s = t.s(u);
            assert_relative_eq!(t.invert(s, 1e-2), u, max_relative = 1e-12);
        }
    }

    #[test]
    fn shoot_cos1_energy_and_width() {
        let nc = shoot(&k(2.0, 2.0, 1.0, 1.0), 1.0, &ShootOptions::default()).unwrap();
        assert!(nc.half_width_gap() < 1e-8, "{}", nc.half_width_gap());
        assert!(nc.scaled_energy_residual() < 1e-8);
        assert_relative_eq!(nc.u_at(0.0), 4.0 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn half_width_matches_beta_closed_form() {
        // L = T/ρ · B(γ/ρ, 1/2) with γ = 1 − σ/2.
        for (m, n, a, b) in [(2.25, 2.0, 1.0, 1.0), (0.5, 0.9, 1.0, -1.0), (3.0, 1.5, 2.0, 0.5), (0.2, 0.7, 1.0, -2.0)] {
            let p = k(m, n, a, b);
            let c = coefficients(&p, 1.0).unwrap();
            let v0 = center_amplitude(&c, &p).unwrap();
            let f = Factorisation::new(&c, &p).unwrap();
            let gamma = 1.0 - 0.5 * f.sigma;
            let exact = f.scale(v0) / f.rho * statrs::function::beta::beta(gamma / f.rho, 0.5);
            let l = half_width_quadrature(&c, &p, v0).unwrap();
            assert_relative_eq!(l, exact, max_relative = 1e-10);
        }
    }

    #[test]
    fn figure_runs() {
        for (m, n, a, b) in [(2.25, 2.0, 1.0, 1.0), (0.5, 0.9, 1.0, -1.0)] {
            let p = k(m, n, a, b);
            let nc = shoot(&p, 1.0, &ShootOptions::default()).unwrap();
            let c = coefficients(&p, 1.0).unwrap();
            assert_relative_eq!(nc.v0, center_amplitude(&c, &p).unwrap());
            assert_eq!(nc.v[nc.v.len() / 2], nc.v0);
            assert!(nc.half_width_gap() < 1e-6);
            assert!(nc.scaled_energy_residual() < 1e-7);
            assert!(nc.scaled_cutoff_residuals().iter().all(|&r| r < 1e-6));
            assert!(nc.scaled_third_derivative_at_cutoff() < 1e-4);
            let half = &nc.v[nc.v.len() / 2..nc.v.len() - 1];
            assert!(half.windows(2).all(|w| w[1] < w[0]));
            for (l, r) in nc.v.iter().zip(nc.v.iter().rev()) {
                assert_eq!(l, r);
            }
        }
    }

    #[test]
    fn factor_two_breaks_the_first_integral() {
        let p = k(2.25, 2.0, 1.0, 1.0);
        let opts = ShootOptions {
            force: ForceFactor::Two,
            ..Default::default()
        };
        assert!(shoot(&p, 1.0, &opts).unwrap().scaled_energy_residual() > 0.1);
    }

    #[test]
    fn csv_header() {
        let nc = shoot(&k(2.0, 2.0, 1.0, 1.0), 1.0, &ShootOptions { grid_points: 5, ..Default::default() }).unwrap();
        let mut out = Vec::new();
        nc.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("xi,V,U\n"));
        assert_eq!(text.lines().count(), 6);
    }

    #[test]
    fn shoot_rejects_convex_crest() {
        let e = shoot(&k(0.5, 2.0, 1.0, 1.0), 1.0, &ShootOptions::default()).unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }
}
