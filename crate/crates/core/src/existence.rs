//! Weak and strong existence conditions in terms of the endpoint power `p`.
//!
//! A profile with `U ~ U₀ (L − |ξ|)^p` at its cutoff is a weak solution of
//! K(m,n) iff `p > 2/n`, and of KP(m,n) iff one of six cases holds (see
//! [`weak_kp_case`]). Strong solutions need `p > 3` and `p > 4` respectively.
//!
//! For the explicit families `m`, `n` and `p` are simple functions of one
//! free power, so the parameter intervals on which each condition holds can
//! be solved exactly over the rationals ([`table1_intervals`]).

use std::fmt;
use std::io::Write;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::profile::{construct, EquationKind, FamilyId, SignPattern};

pub type Q = Ratio<i64>;

/// Relative tolerance for the equality tests in cases 4–6.
pub const EQ_TOL: f64 = 1e-9;

fn rel_eq(x: f64, y: f64) -> bool {
    (x - y).abs() <= EQ_TOL * x.abs().max(y.abs())
}

/// `p > 2/n`.
pub fn weak_k_ok(p: f64, n: f64) -> Result<bool> {
    if !(p > 0.0) || !(n > 0.0) {
        return Err(Error::Domain(format!("need p > 0 and n > 0, got p={p}, n={n}")));
    }
    Ok(p > 2.0 / n)
}

/// Amplitude forced by case 4.
pub fn case4_amplitude(n: f64, g: f64, b: f64) -> f64 {
    (g / (2.0 * b) * (n - 1.0).powi(2) / (n * (n + 1.0))).powf((n - 1.0) / ((n - 2.0) * (n + 1.0)))
}

/// Amplitude forced by cases 5 and 6.
pub fn case56_amplitude(m: f64, n: f64, a: f64, b: f64) -> f64 {
    (-a / (2.0 * b) * (n - m).powi(2) / (n * (n + m))).powf(1.0 / (n - m))
}

/// Lowest-numbered weak KP(m,n) case satisfied, if any.
///
/// 1. `p > max(1/m, 3/n)`, `g = 0`
/// 2. `p > max(1/m, 3/n)`, `m < 1`, `g ≠ 0`
/// 3. `p > max(1, 3/n)`, `m > 1`, `g ≠ 0`
/// 4. `1 ≥ p = 2/(n−1)`, `2m+1 > n ≥ 3`, `g ≠ 0`, `U₀` fixed
/// 5. `p = 2/(n−m)`, `n ≥ 3m`, `g = 0`, `U₀` fixed
/// 6. `p = 2/(n−m)`, `m+2 > n ≥ 3m`, `g ≠ 0`, `U₀` fixed
///
/// Cases 4–6 are only reported when `u0` is given and matches.
pub fn weak_kp_case(p: f64, m: f64, n: f64, g: f64, a: f64, b: f64, u0: Option<f64>) -> Result<Option<u8>> {
    if !(m > 0.0) || !(n > 0.0) || m == 1.0 || !(p > 0.0) {
        return Err(Error::Domain(format!(
            "invalid powers for the KP conditions: p={p}, m={m}, n={n}"
        )));
    }
    let u0_matches = |target: f64| u0.is_some_and(|u| target.is_finite() && rel_eq(u, target));
    let zero_g = g == 0.0;

    if p > (1.0 / m).max(3.0 / n) && zero_g {
        return Ok(Some(1));
    }
    if p > (1.0 / m).max(3.0 / n) && m < 1.0 && !zero_g {
        return Ok(Some(2));
    }
    if p > 1.0f64.max(3.0 / n) && m > 1.0 && !zero_g {
        return Ok(Some(3));
    }
    if !zero_g
        && 1.0 >= p
        && rel_eq(p, 2.0 / (n - 1.0))
        && 2.0 * m + 1.0 > n
        && n >= 3.0
        && u0_matches(case4_amplitude(n, g, b))
    {
        return Ok(Some(4));
    }
    let p_nm = n > m && rel_eq(p, 2.0 / (n - m));
    if zero_g && p_nm && n >= 3.0 * m && u0_matches(case56_amplitude(m, n, a, b)) {
        return Ok(Some(5));
    }
    if !zero_g && p_nm && m + 2.0 > n && n >= 3.0 * m && u0_matches(case56_amplitude(m, n, a, b)) {
        return Ok(Some(6));
    }
    Ok(None)
}

/// `p > 3` for K, `p > 4` for KP.
pub fn strong_ok(p: f64, kind: EquationKind) -> bool {
    match kind {
        EquationKind::K => p > 3.0,
        EquationKind::KP => p > 4.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExistenceReport {
    pub p: f64,
    #[serde(rename = "weak_K")]
    pub weak_k: bool,
    #[serde(rename = "strong_K")]
    pub strong_k: bool,
    #[serde(rename = "weak_KP")]
    pub weak_kp: Option<u8>,
    #[serde(rename = "strong_KP")]
    pub strong_kp: bool,
    #[serde(rename = "U0_constraint")]
    pub u0_constraint: Option<f64>,
    pub reasons: Vec<String>,
}

/// Full verdict for a profile with endpoint power `p` and amplitude `u0`.
pub fn classify(p: f64, m: f64, n: f64, g: f64, a: f64, b: f64, u0: Option<f64>) -> Result<ExistenceReport> {
    let weak_k = weak_k_ok(p, n)?;
    let weak_kp = weak_kp_case(p, m, n, g, a, b, u0)?;
    let strong_k = weak_k && strong_ok(p, EquationKind::K);
    let strong_kp = weak_kp.is_some() && strong_ok(p, EquationKind::KP);

    let mut reasons = Vec::new();
    let tick = |ok: bool| if ok { "holds" } else { "fails" };
    reasons.push(format!("p > 2/n ({p:.6} vs {:.6}) {}", 2.0 / n, tick(weak_k)));
    reasons.push(format!("p > 3 {}", tick(p > 3.0)));
    reasons.push(format!("p > 4 {}", tick(p > 4.0)));
    let u0_constraint = match weak_kp {
        Some(c) => {
            reasons.push(format!("weak KP case {c} holds"));
            match c {
                4 => Some(case4_amplitude(n, g, b)),
                5 | 6 => Some(case56_amplitude(m, n, a, b)),
                _ => None,
            }
        }
        None => {
            reasons.push("no weak KP case holds".into());
            None
        }
    };
    Ok(ExistenceReport {
        p,
        weak_k,
        strong_k,
        weak_kp,
        strong_kp,
        u0_constraint,
        reasons,
    })
}

/// Unit coefficients `(a, b, g)` with the family's sign pattern.
pub fn unit_coefficients(family: FamilyId) -> (f64, f64, f64) {
    match family.sign_pattern() {
        SignPattern::AllEqual => (1.0, 1.0, 1.0),
        SignPattern::BOpposite => (1.0, -1.0, 1.0),
    }
}

/// Classify a family member. The endpoint amplitude comes from the
/// explicit profile at coefficients `(a, b, g)`, so cases 4–6 are decided
/// on the actual solution. Outside the family's domain every flag is false.
pub fn classify_family(family: FamilyId, x: f64, a: f64, b: f64, g: f64) -> ExistenceReport {
    let (m, n) = family.powers(x);
    let p = family.endpoint_power(x);
    let u0 = construct(family, x, a, b, g).ok().map(|pr| pr.endpoint_amplitude());
    classify(p, m, n, g, a, b, u0).unwrap_or_else(|e| ExistenceReport {
        p,
        weak_k: false,
        strong_k: false,
        weak_kp: None,
        strong_kp: false,
        u0_constraint: None,
        reasons: vec![e.to_string()],
    })
}

// ---------------------------------------------------------------------------
// Exact interval solving

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Bound {
    NegInf,
    PosInf,
    Open(#[serde(serialize_with = "ser_q")] Q),
    Closed(#[serde(serialize_with = "ser_q")] Q),
}

fn ser_q<S: serde::Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(q))
}

fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
}

impl Interval {
    pub fn open(lo: Q, hi: Option<Q>) -> Self {
        Interval {
            lo: Bound::Open(lo),
            hi: hi.map_or(Bound::PosInf, Bound::Open),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let q = |r: &Q| *r.numer() as f64 / *r.denom() as f64;
        let above = match &self.lo {
            Bound::NegInf => true,
            Bound::Open(r) => x > q(r),
            Bound::Closed(r) => x >= q(r),
            Bound::PosInf => false,
        };
        let below = match &self.hi {
            Bound::PosInf => true,
            Bound::Open(r) => x < q(r),
            Bound::Closed(r) => x <= q(r),
            Bound::NegInf => false,
        };
        above && below
    }

    /// Both endpoints as floats (`±∞` for unbounded sides).
    pub fn endpoints(&self) -> (f64, f64) {
        let f = |b: &Bound| match b {
            Bound::NegInf => f64::NEG_INFINITY,
            Bound::PosInf => f64::INFINITY,
            Bound::Open(r) | Bound::Closed(r) => *r.numer() as f64 / *r.denom() as f64,
        };
        (f(&self.lo), f(&self.hi))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = match &self.lo {
            Bound::NegInf => "(-inf".to_string(),
            Bound::Open(r) => format!("({}", fmt_q(r)),
            Bound::Closed(r) => format!("[{}", fmt_q(r)),
            Bound::PosInf => "(inf".to_string(),
        };
        let hi = match &self.hi {
            Bound::PosInf => "inf)".to_string(),
            Bound::Open(r) => format!("{})", fmt_q(r)),
            Bound::Closed(r) => format!("{}]", fmt_q(r)),
            Bound::NegInf => "-inf)".to_string(),
        };
        write!(f, "{lo},{hi}")
    }
}

/// `c0 + c1·x`
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Lin {
    c0: Q,
    c1: Q,
}

impl Lin {
    fn new(c0: (i64, i64), c1: (i64, i64)) -> Self {
        Lin {
            c0: Q::new(c0.0, c0.1),
            c1: Q::new(c1.0, c1.1),
        }
    }
    fn konst(c: i64) -> Self {
        Lin::new((c, 1), (0, 1))
    }
    fn eval(&self, x: Q) -> Q {
        self.c0 + self.c1 * x
    }
    fn scale(&self, s: Q) -> Lin {
        Lin {
            c0: self.c0 * s,
            c1: self.c1 * s,
        }
    }
    fn sub(&self, o: &Lin) -> Lin {
        Lin {
            c0: self.c0 - o.c0,
            c1: self.c1 - o.c1,
        }
    }
    fn root(&self) -> Option<Q> {
        (!self.c1.is_zero()).then(|| -self.c0 / self.c1)
    }
}

/// `m(x)`, `n(x)` and `p(x) = P / d(x)` for one family.
struct Relation {
    m: Lin,
    n: Lin,
    p_num: Q,
    p_den: Lin,
}

fn relation(f: FamilyId) -> Relation {
    use FamilyId::*;
    let x = Lin::new((0, 1), (1, 1));
    let (m, n) = match f {
        Zsq1 => (Lin::new((1, 2), (1, 2)), x),
        Zsq2 => (Lin::new((2, 1), (-1, 1)), x),
        Cos1 => (x, x),
        Cos2 => (x, Lin::konst(1)),
        Cn1 | Cn2 | Sn1 | Sn2 => (Lin::new((-1, 1), (2, 1)), x),
        Ratcn1 | Ratcn2 | Ratcn3 => (Lin::new((-2, 1), (3, 1)), x),
        Ratcn4 | Ratcn5 | Ratcn6 => (Lin::new((-1, 2), (3, 2)), x),
    };
    let (p_num, p_den) = match f {
        Zsq1 | Cos1 | Cn2 | Sn2 | Ratcn1 | Ratcn2 | Ratcn6 => (2, Lin::new((-1, 1), (1, 1))),
        Zsq2 => (1, Lin::new((-1, 1), (1, 1))),
        Cos2 | Cn1 | Sn1 => (2, Lin::new((1, 1), (-1, 1))),
        Ratcn3 => (1, Lin::new((1, 1), (-1, 1))),
        Ratcn4 | Ratcn5 => (4, Lin::new((1, 1), (-1, 1))),
    };
    Relation {
        m,
        n,
        p_num: Q::from_integer(p_num),
        p_den,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Column {
    WeakK,
    StrongK,
    WeakKp,
    StrongKp,
}

impl Relation {
    /// `p ≡ 2/(n−m)` as functions of the free power.
    fn p_is_two_over_n_minus_m(&self) -> bool {
        self.n.sub(&self.m).scale(self.p_num) == self.p_den.scale(Q::from_integer(2))
    }

    /// Linear forms whose roots are the only places a verdict can change.
    fn critical_forms(&self) -> Vec<Lin> {
        let pn = self.p_num;
        let d = &self.p_den;
        let q = Q::from_integer;
        vec![
            self.n,
            self.m,
            self.m.sub(&Lin::konst(1)),
            *d,
            self.n.scale(pn).sub(&d.scale(q(2))),
            Lin::konst(0).sub(&d.scale(q(3))).sub(&Lin { c0: -pn, c1: q(0) }),
            Lin::konst(0).sub(&d.scale(q(4))).sub(&Lin { c0: -pn, c1: q(0) }),
            Lin::konst(0).sub(d).sub(&Lin { c0: -pn, c1: q(0) }),
            self.m.scale(pn).sub(d),
            self.n.scale(pn).sub(&d.scale(q(3))),
            self.n.sub(&self.m.scale(q(3))),
            self.m.sub(&self.n).sub(&Lin::konst(-2)),
        ]
    }

    fn holds(&self, col: Column, x: Q) -> bool {
        let (m, n, d) = (self.m.eval(x), self.n.eval(x), self.p_den.eval(x));
        if !m.is_positive() || !n.is_positive() || m.is_one() || d.is_zero() {
            return false;
        }
        let p = self.p_num / d;
        if !p.is_positive() {
            return false;
        }
        let q = Q::from_integer;
        let weak_k = p > q(2) / n;
        let weak_kp = || {
            let three_n = q(3) / n;
            let case2 = m < q(1) && p > m.recip().max(three_n);
            let case3 = m > q(1) && p > q(1).max(three_n);
            let case6 = self.p_is_two_over_n_minus_m() && m + q(2) > n && n >= q(3) * m;
            weak_k && (case2 || case3 || case6)
        };
        match col {
            Column::WeakK => weak_k,
            Column::StrongK => weak_k && p > q(3),
            Column::WeakKp => weak_kp(),
            Column::StrongKp => weak_kp() && p > q(4),
        }
    }

    /// Exact solution set of one column, as a union of disjoint intervals.
    fn solve(&self, col: Column) -> Vec<Interval> {
        let mut pts: Vec<Q> = self.critical_forms().iter().filter_map(Lin::root).collect();
        pts.sort();
        pts.dedup();
        if pts.is_empty() {
            pts.push(Q::zero());
        }
        let two = Q::from_integer(2);
        // Cells: (-inf, c0), {c0}, (c0, c1), {c1}, ..., (ck, inf)
        let mut cells: Vec<(bool, Bound, Bound)> = Vec::new();
        let first = pts[0] - Q::one();
        cells.push((self.holds(col, first), Bound::NegInf, Bound::Open(pts[0])));
        for (i, &c) in pts.iter().enumerate() {
            cells.push((self.holds(col, c), Bound::Closed(c), Bound::Closed(c)));
            let (mid, hi) = match pts.get(i + 1) {
                Some(&nx) => ((c + nx) / two, Bound::Open(nx)),
                None => (c + Q::one(), Bound::PosInf),
            };
            cells.push((self.holds(col, mid), Bound::Open(c), hi));
        }

        let mut out = Vec::new();
        let mut cur: Option<Bound> = None;
        let mut last_hi = Bound::NegInf;
        for (ok, lo, hi) in cells {
            if ok {
                if cur.is_none() {
                    cur = Some(lo);
                }
                last_hi = hi;
            } else if let Some(l) = cur.take() {
                out.push(Interval { lo: l, hi: last_hi });
            }
        }
        if let Some(l) = cur {
            out.push(Interval { lo: l, hi: last_hi });
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub family: FamilyId,
    pub variable: &'static str,
    pub p: &'static str,
    #[serde(rename = "weak_K")]
    pub weak_k: Interval,
    #[serde(rename = "strong_K")]
    pub strong_k: Interval,
    #[serde(rename = "weak_KP")]
    pub weak_kp: Interval,
    #[serde(rename = "strong_KP")]
    pub strong_kp: Interval,
    /// Weak KP interval exactly as solved from the case list, kept for audit
    /// where the published row differs.
    #[serde(rename = "weak_KP_raw")]
    pub weak_kp_raw: Interval,
}

fn single(family: FamilyId, set: Vec<Interval>) -> Interval {
    match set.as_slice() {
        [one] => *one,
        _ => panic!("{family}: expected a single interval, got {set:?}"),
    }
}

fn p_formula(f: FamilyId) -> &'static str {
    use FamilyId::*;
    match f {
        Zsq1 | Cos1 | Cn2 | Sn2 | Ratcn1 | Ratcn2 | Ratcn6 => "2/(n-1)",
        Zsq2 => "1/(n-1)",
        Cos2 => "2/(1-m)",
        Cn1 | Sn1 => "2/(1-n)",
        Ratcn3 => "1/(1-n)",
        Ratcn4 | Ratcn5 => "4/(1-n)",
    }
}

/// Intervals of the free power on which each existence condition holds.
///
/// All columns are solved exactly. For RATCN1, RATCN2 and RATCN6 the
/// published weak KP entry is unbounded above while the case list gives
/// `(1, 3)`; the published entry is returned and the solved one is kept in
/// `weak_kp_raw`.
pub fn table1_intervals(family: FamilyId) -> Table1Row {
    let rel = relation(family);
    let weak_kp_raw = single(family, rel.solve(Column::WeakKp));
    let weak_kp = match family {
        FamilyId::Ratcn1 | FamilyId::Ratcn2 | FamilyId::Ratcn6 => Interval {
            lo: weak_kp_raw.lo,
            hi: Bound::PosInf,
        },
        _ => weak_kp_raw,
    };
    Table1Row {
        family,
        variable: family.free_var(),
        p: p_formula(family),
        weak_k: single(family, rel.solve(Column::WeakK)),
        strong_k: single(family, rel.solve(Column::StrongK)),
        weak_kp,
        strong_kp: single(family, rel.solve(Column::StrongKp)),
        weak_kp_raw,
    }
}

pub fn table1() -> Vec<Table1Row> {
    FamilyId::ALL.iter().map(|&f| table1_intervals(f)).collect()
}

pub fn write_table1_csv<W: Write>(rows: &[Table1Row], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["family", "variable", "p", "weak_K", "strong_K", "weak_KP", "strong_KP"])?;
    for r in rows {
        wr.write_record([
            r.family.name().to_string(),
            r.variable.to_string(),
            r.p.to_string(),
            r.weak_k.to_string(),
            r.strong_k.to_string(),
            r.weak_kp.to_string(),
            r.strong_kp.to_string(),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionPoint {
    pub m: f64,
    pub n: f64,
    #[serde(rename = "weak_K")]
    pub weak_k: bool,
    #[serde(rename = "strong_K")]
    pub strong_k: bool,
    #[serde(rename = "weak_KP_case")]
    pub weak_kp_case: Option<u8>,
    #[serde(rename = "strong_KP")]
    pub strong_kp: bool,
}

/// Classify `steps` uniformly spaced values of the free power in
/// `[lo, hi]`, at unit coefficients with the family's sign pattern.
pub fn region_grid(family: FamilyId, lo: f64, hi: f64, steps: usize) -> Result<Vec<RegionPoint>> {
    if steps < 2 {
        return Err(Error::InvalidParams(format!("region grid needs at least 2 steps, got {steps}")));
    }
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(Error::InvalidParams(format!("bad range [{lo}, {hi}]")));
    }
    let (a, b, g) = unit_coefficients(family);
    Ok((0..steps)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / (steps - 1) as f64;
            let (m, n) = family.powers(x);
            let r = classify_family(family, x, a, b, g);
            RegionPoint {
                m,
                n,
                weak_k: r.weak_k,
                strong_k: r.strong_k,
                weak_kp_case: r.weak_kp,
                strong_kp: r.strong_kp,
            }
        })
        .collect())
}

pub fn write_region_csv<W: Write>(points: &[RegionPoint], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["m", "n", "weak_K", "strong_K", "weak_KP_case", "strong_KP"])?;
    for p in points {
        wr.write_record([
            format!("{}", p.m),
            format!("{}", p.n),
            p.weak_k.to_string(),
            p.strong_k.to_string(),
            p.weak_kp_case.map(|c| c.to_string()).unwrap_or_default(),
            p.strong_kp.to_string(),
        ])?;
    }
    wr.flush()?;
    Ok(())
}
