//! Dormand–Prince 5(4) with dense output and event location.
//!
//! Fixed-size state (`[f64; N]`), FSAL stages, the standard PI-free step
//! controller, and Hairer's fourth-order continuous extension. Events are
//! located on the continuous extension with an Illinois false-position
//! iteration.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Difference between the 5th and 4th order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// Dense output.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: Option<f64>,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Dopri5 {
            rtol: 1e-10,
            atol: 1e-12,
            h_init: None,
            h_min: 1e-14,
            h_max: f64::INFINITY,
            max_steps: 200_000,
        }
    }
}

/// One accepted step with the coefficients of its continuous extension.
#[derive(Debug, Clone, Copy)]
pub struct Step<const N: usize> {
    pub t0: f64,
    pub h: f64,
    r: [[f64; N]; 5],
}

impl<const N: usize> Step<N> {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn eval(&self, t: f64) -> [f64; N] {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        let [r1, r2, r3, r4, r5] = &self.r;
        std::array::from_fn(|i| r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i]))))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Reached,
    Event,
}

#[derive(Debug, Clone)]
pub struct Trajectory<const N: usize> {
    pub steps: Vec<Step<N>>,
    pub t_final: f64,
    pub y_final: [f64; N],
    pub termination: Termination,
    pub rhs_evaluations: usize,
    pub rejected_steps: usize,
}

impl<const N: usize> Trajectory<N> {
    pub fn t_start(&self) -> f64 {
        self.steps.first().map(|s| s.t0).unwrap_or(self.t_final)
    }

    /// Dense-output evaluation anywhere in `[t_start, t_final]`.
    pub fn eval(&self, t: f64) -> [f64; N] {
        if self.steps.is_empty() || t >= self.t_final {
            return self.y_final;
        }
        let idx = self.steps.partition_point(|s| s.t1() <= t).min(self.steps.len() - 1);
        self.steps[idx].eval(t)
    }
}

impl Dopri5 {
    pub fn new(rtol: f64, atol: f64) -> Self {
        Dopri5 {
            rtol,
            atol,
            ..Default::default()
        }
    }

    /// Integrate `y' = f(t, y)` from `t0` towards `t_end`, stopping at the
    /// first zero of `event` reached while it goes from positive to
    /// non-positive. `stop` may veto the integration after each accepted
    /// step (returning an error message).
    pub fn integrate<const N: usize, F, G, S>(
        &self,
        mut f: F,
        t0: f64,
        y0: [f64; N],
        t_end: f64,
        mut event: G,
        mut stop: S,
    ) -> Result<Trajectory<N>>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
        G: FnMut(f64, &[f64; N]) -> f64,
        S: FnMut(f64, &[f64; N], &[f64; N]) -> Option<String>,
    {
        if !(t_end > t0) {
            return Err(Error::InvalidParams(format!("empty integration interval [{t0}, {t_end}]")));
        }
        let mut t = t0;
        let mut y = y0;
        let mut k1 = f(t, &y);
        let mut evals = 1usize;
        let mut rejected = 0usize;
        let mut g_prev = event(t, &y);
        let mut steps = Vec::new();

        let mut h = match self.h_init {
            Some(h) => h,
            None => self.initial_step(&mut f, t, &y, &k1, t_end - t0, &mut evals),
        };
        let mut err_prev = 1e-4f64;

        for _ in 0..self.max_steps {
            h = h.min(self.h_max).min(t_end - t);
            if h < self.h_min {
                return Err(Error::Internal(format!("step size underflow at t = {t}")));
            }

            let stage = |a: &[f64; N], ks: &[(&[f64; N], f64)]| -> [f64; N] {
                std::array::from_fn(|i| a[i] + h * ks.iter().map(|(k, c)| c * k[i]).sum::<f64>())
            };
            let k2 = f(t + C2 * h, &stage(&y, &[(&k1, A21)]));
            let k3 = f(t + C3 * h, &stage(&y, &[(&k1, A31), (&k2, A32)]));
            let k4 = f(t + C4 * h, &stage(&y, &[(&k1, A41), (&k2, A42), (&k3, A43)]));
            let k5 = f(t + C5 * h, &stage(&y, &[(&k1, A51), (&k2, A52), (&k3, A53), (&k4, A54)]));
            let k6 = f(
                t + h,
                &stage(&y, &[(&k1, A61), (&k2, A62), (&k3, A63), (&k4, A64), (&k5, A65)]),
            );
            let y_new = stage(&y, &[(&k1, A71), (&k3, A73), (&k4, A74), (&k5, A75), (&k6, A76)]);
            let k7 = f(t + h, &y_new);
            evals += 6;

            let mut err = 0.0f64;
            for i in 0..N {
                let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
                err += (e / sc).powi(2);
            }
            let err = (err / N as f64).sqrt();
            if !err.is_finite() {
                h *= 0.2;
                rejected += 1;
                continue;
            }

            if err <= 1.0 {
                let mut r = [[0.0; N]; 5];
                for i in 0..N {
                    let dy = y_new[i] - y[i];
                    let bspl = h * k1[i] - dy;
                    r[0][i] = y[i];
                    r[1][i] = dy;
                    r[2][i] = bspl;
                    r[3][i] = dy - h * k7[i] - bspl;
                    r[4][i] =
                        h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
                }
                let step = Step { t0: t, h, r };
                let t_new = t + h;
                let g_new = event(t_new, &y_new);

                if g_prev > 0.0 && g_new <= 0.0 {
                    let te = locate(&step, &mut event, t, g_prev, t_new, g_new);
                    let ye = step.eval(te);
                    steps.push(step);
                    return Ok(Trajectory {
                        steps,
                        t_final: te,
                        y_final: ye,
                        termination: Termination::Event,
                        rhs_evaluations: evals,
                        rejected_steps: rejected,
                    });
                }
                steps.push(step);
                if let Some(msg) = stop(t_new, &y_new, &k7) {
                    return Err(Error::NonCompact(msg));
                }
                t = t_new;
                y = y_new;
                k1 = k7;
                g_prev = g_new;
                if t >= t_end {
                    return Ok(Trajectory {
                        steps,
                        t_final: t,
                        y_final: y,
                        termination: Termination::Reached,
                        rhs_evaluations: evals,
                        rejected_steps: rejected,
                    });
                }
                // Gustafsson PI control.
                let fac = 0.9 * err.max(1e-10).powf(-0.7 / 5.0) * err_prev.powf(0.4 / 5.0);
                h *= fac.clamp(0.2, 5.0);
                err_prev = err.max(1e-4);
            } else {
                rejected += 1;
                h *= (0.9 * err.powf(-0.2)).max(0.2);
            }
        }
        Err(Error::Internal(format!("step limit {} exceeded at t = {t}", self.max_steps)))
    }

    fn initial_step<const N: usize, F>(
        &self,
        f: &mut F,
        t: f64,
        y: &[f64; N],
        k1: &[f64; N],
        span: f64,
        evals: &mut usize,
    ) -> f64
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        let sc: [f64; N] = std::array::from_fn(|i| self.atol + self.rtol * y[i].abs());
        let norm = |v: &[f64; N]| (v.iter().zip(&sc).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / N as f64).sqrt();
        let d0 = norm(y);
        let d1 = norm(k1);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(span);
        let y1: [f64; N] = std::array::from_fn(|i| y[i] + h0 * k1[i]);
        let k2 = f(t + h0, &y1);
        *evals += 1;
        let diff: [f64; N] = std::array::from_fn(|i| k2[i] - k1[i]);
        let d2 = norm(&diff) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(span)
    }
}

fn locate<const N: usize, G>(step: &Step<N>, event: &mut G, mut ta: f64, mut ga: f64, mut tb: f64, mut gb: f64) -> f64
where
    G: FnMut(f64, &[f64; N]) -> f64,
{
    let mut side = 0i8;
    for _ in 0..200 {
        let t = (ta * gb - tb * ga) / (gb - ga);
        let t = if t > ta && t < tb { t } else { 0.5 * (ta + tb) };
        let g = event(t, &step.eval(t));
        if g > 0.0 {
            ta = t;
            ga = g;
            if side == 1 {
                gb *= 0.5;
            }
            side = 1;
        } else {
            tb = t;
            gb = g;
            if side == -1 {
                ga *= 0.5;
            }
            side = -1;
        }
        if (tb - ta) <= 4.0 * f64::EPSILON * tb.abs().max(1.0) || g == 0.0 {
            break;
        }
    }
    tb
}
