//! Double-exponential (tanh-sinh) quadrature.
//!
//! The substitution `x = mid + half·tanh(π/2·sinh t)` clusters nodes at both
//! ends of the interval with doubly exponential density, which makes the
//! trapezoid rule in `t` converge for integrands with algebraic endpoint
//! singularities. Integrands receive the distances to both endpoints
//! alongside `x`, computed without cancellation, so expressions such as
//! `1 - (x/x0)^r` can be evaluated accurately near the right end.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Where a node sits inside `[a, b]`.
#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub x: f64,
    /// `x - a`, accurate even when it is far below `ulp(a)`.
    pub from_left: f64,
    /// `b - x`, same accuracy.
    pub from_right: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct TanhSinh {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_level: usize,
}

impl Default for TanhSinh {
    fn default() -> Self {
        TanhSinh {
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            max_level: 10,
        }
    }
}

impl TanhSinh {
    pub fn new(rel_tol: f64, abs_tol: f64) -> Self {
        TanhSinh {
            rel_tol,
            abs_tol,
            ..Default::default()
        }
    }

    /// Integrate `f` over `[a, b]`. Returns the last estimate together with
    /// the difference between the last two levels.
    pub fn integrate<F>(&self, mut f: F, a: f64, b: f64) -> Result<QuadResult>
    where
        F: FnMut(Node) -> f64,
    {
        let (value, err, evals) = self.run(&mut f, a, b);
        if !value.is_finite() {
            return Err(Error::Quadrature { estimate: f64::NAN });
        }
        if err > self.rel_tol * value.abs() && err > self.abs_tol {
            return Err(Error::Quadrature { estimate: err });
        }
        Ok(QuadResult {
            value,
            error_estimate: err,
            evaluations: evals,
        })
    }

    /// Like [`integrate`](Self::integrate) but never fails on tolerance;
    /// callers that split panels adaptively inspect the estimate themselves.
    pub fn integrate_unchecked<F>(&self, mut f: F, a: f64, b: f64) -> QuadResult
    where
        F: FnMut(Node) -> f64,
    {
        let (value, err, evals) = self.run(&mut f, a, b);
        QuadResult {
            value,
            error_estimate: err,
            evaluations: evals,
        }
    }

    fn run<F>(&self, f: &mut F, a: f64, b: f64) -> (f64, f64, usize)
    where
        F: FnMut(Node) -> f64,
    {
        if a == b {
            return (0.0, 0.0, 0);
        }
        let half = 0.5 * (b - a);
        let mut evals = 0usize;

        // Level 0: step h = 1, all integer t.
        let mut h = 1.0;
        let mut sum = level_sum(f, a, b, half, h, 1, &mut evals);
        let mut estimate = h * sum;
        let mut err = f64::INFINITY;

        for _level in 1..=self.max_level {
            h *= 0.5;
            // Only odd multiples of the new step are new nodes.
            sum += level_sum(f, a, b, half, h, 2, &mut evals);
            let next = h * sum;
            err = (next - estimate).abs();
            estimate = next;
            if err <= self.rel_tol * estimate.abs() || err <= self.abs_tol {
                break;
            }
        }
        (estimate, err, evals)
    }
}

/// Sum of `w(t)·f(x(t))` over `t = k·h` with `k` stepping by `stride`
/// (stride 1 on the first level, 2 afterwards so only new nodes are added).
fn level_sum<F>(f: &mut F, a: f64, b: f64, half: f64, h: f64, stride: usize, evals: &mut usize) -> f64
where
    F: FnMut(Node) -> f64,
{
    let mut sum = 0.0;
    let start = if stride == 1 { 0 } else { 1 };
    let mut k = start;
    loop {
        let t = k as f64 * h;
        let u = FRAC_PI_2 * t.sinh();
        // 1 - tanh(u) = 2 e^{-2u} / (1 + e^{-2u})
        let e = (-2.0 * u).exp();
        let comp = 2.0 * e / (1.0 + e);
        let weight = FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
        let dist = half * comp;
        if dist < 1e-300 || weight < 1e-300 || !weight.is_finite() {
            break;
        }
        let w = half * weight;
        if k == 0 {
            let x = a + half;
            sum += w * f(Node {
                x,
                from_left: half,
                from_right: half,
            });
            *evals += 1;
        } else {
            let inner = 2.0 * half - dist;
            let right = Node {
                x: b - dist,
                from_left: inner,
                from_right: dist,
            };
            let left = Node {
                x: a + dist,
                from_left: dist,
                from_right: inner,
            };
            sum += w * (f(right) + f(left));
            *evals += 2;
        }
        k += stride;
    }
    sum
}

/// Adaptive integration over the panels between consecutive `breaks`.
///
/// Each panel is handled by tanh-sinh; a panel that misses the tolerance is
/// bisected, up to `max_depth` times. The returned error estimate is the sum
/// of the per-panel estimates.
pub fn integrate_panels<F>(rule: &TanhSinh, mut f: F, breaks: &[f64], max_depth: usize) -> Result<QuadResult>
where
    F: FnMut(f64) -> f64,
{
    let mut total = QuadResult {
        value: 0.0,
        error_estimate: 0.0,
        evaluations: 0,
    };
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let r = adaptive(rule, &mut f, lo, hi, max_depth)?;
        total.value += r.value;
        total.error_estimate += r.error_estimate;
        total.evaluations += r.evaluations;
    }
    Ok(total)
}

fn adaptive<F>(rule: &TanhSinh, f: &mut F, lo: f64, hi: f64, depth: usize) -> Result<QuadResult>
where
    F: FnMut(f64) -> f64,
{
    let r = rule.integrate_unchecked(|node| f(node.x), lo, hi);
    if !r.value.is_finite() {
        return Err(Error::Quadrature { estimate: f64::NAN });
    }
    let ok = r.error_estimate <= rule.rel_tol * r.value.abs() || r.error_estimate <= rule.abs_tol;
    if ok {
        return Ok(r);
    }
    if depth == 0 {
        return Err(Error::Quadrature {
            estimate: r.error_estimate,
        });
    }
    let mid = 0.5 * (lo + hi);
    let left = adaptive(rule, f, lo, mid, depth - 1)?;
    let right = adaptive(rule, f, mid, hi, depth - 1)?;
    Ok(QuadResult {
        value: left.value + right.value,
        error_estimate: left.error_estimate + right.error_estimate,
        evaluations: r.evaluations + left.evaluations + right.evaluations,
    })
}
