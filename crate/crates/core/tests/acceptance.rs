//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line
//! with its measured quantities and timing; the test fails if any is red.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::time::{Duration, Instant};

use compacton::elliptic::{complete_k, jacobi, Modulus};
use compacton::existence::{classify_family, table1, table1_intervals, unit_coefficients, write_table1_csv};
use compacton::numeric::{center_amplitude, coefficients, shoot, ForceFactor, ShootOptions};
use compacton::profile::{construct, EquationKind, EquationParams, FamilyId};
use compacton::weak::{boundary_quantities, default_battery, endpoint_power_fit, verify, Lowered, ProfileFn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

/// Three points inside the weak-K interval of `family`.
fn draws(family: FamilyId) -> [f64; 3] {
    let (lo, hi) = table1_intervals(family).weak_k.endpoints();
    if hi.is_finite() {
        [0.25, 0.5, 0.75].map(|t| lo + (hi - lo) * t)
    } else {
        [1.25, 1.5, 2.0].map(|t| lo * t)
    }
}

/// Transcription of the published existence table, merged rows expanded.
const PUBLISHED: [(&str, [&str; 4]); 14] = [
    ("zsq1", ["(1,inf)", "(1,5/3)", "(1,3)", "(1,3/2)"]),
    ("zsq2", ["(1,2)", "(1,4/3)", "(1,2)", "(1,5/4)"]),
    ("cos1", ["(1,inf)", "(1,5/3)", "(1,3)", "(1,3/2)"]),
    ("cos2", ["(0,1)", "(1/3,1)", "(0,1)", "(1/2,1)"]),
    ("cn1", ["(1/2,1)", "(1/2,1)", "(1/2,1)", "(1/2,1)"]),
    ("cn2", ["(1,inf)", "(1,5/3)", "(1,3)", "(1,3/2)"]),
    ("sn1", ["(1/2,1)", "(1/2,1)", "(1/2,1)", "(1/2,1)"]),
    ("sn2", ["(1,inf)", "(1,5/3)", "(1,3)", "(1,3/2)"]),
    ("ratcn1", ["(1,inf)", "(1,5/3)", "(1,inf)", "(1,3/2)"]),
    ("ratcn2", ["(1,inf)", "(1,5/3)", "(1,inf)", "(1,3/2)"]),
    ("ratcn3", ["(2/3,1)", "(2/3,1)", "(2/3,1)", "(3/4,1)"]),
    ("ratcn4", ["(1/3,1)", "(1/3,1)", "(1/3,1)", "(1/3,1)"]),
    ("ratcn5", ["(1/3,1)", "(1/3,1)", "(1/3,1)", "(1/3,1)"]),
    ("ratcn6", ["(1,inf)", "(1,5/3)", "(1,inf)", "(1,3/2)"]),
];

fn table_reproduction() -> Outcome {
    let t = Instant::now();
    let rows = table1();
    let elapsed = t.elapsed();
    let mut mismatches = Vec::new();
    let mut endpoints = 0;
    for (row, (name, cols)) in rows.iter().zip(PUBLISHED) {
        let got = [row.weak_k, row.strong_k, row.weak_kp, row.strong_kp].map(|i| i.to_string());
        for (g, want) in got.iter().zip(cols) {
            endpoints += want.split(',').filter(|e| !e.contains("inf")).count();
            if g != want {
                mismatches.push(format!("{name}: {g} vs {want}"));
            }
        }
        if row.family.name() != name {
            mismatches.push(format!("row order: {} vs {name}", row.family));
        }
    }
    let mut csv = Vec::new();
    write_table1_csv(&rows, &mut csv).unwrap();
    let golden = include_str!("golden/table1.csv");
    let golden_ok = String::from_utf8(csv).unwrap() == golden;
    outcome(
        mismatches.is_empty() && golden_ok && rows.len() == 14 && elapsed < Duration::from_secs(1),
        format!(
            "{} rows, {endpoints} finite endpoints, {} mismatches {:?}, golden {}",
            rows.len(),
            mismatches.len(),
            mismatches,
            if golden_ok { "identical" } else { "differs" }
        ),
    )
}

fn intro_fixture() -> Outcome {
    let p = construct(FamilyId::Cos1, 2.0, 1.0, 1.0, 1.0).unwrap();
    let ok = p.alpha == 4.0 / 3.0 && p.beta == 0.25 && (p.l - 2.0 * PI).abs() < 1e-10;
    outcome(ok, format!("alpha={:?} beta={:?} L-2pi={:.2e}", p.alpha, p.beta, p.l - 2.0 * PI))
}

fn weak_residual_suite() -> Outcome {
    let t = Instant::now();
    let mut worst_k = 0.0f64;
    let mut worst_kp = 0.0f64;
    let mut kp_points = 0;
    let mut failures = Vec::new();
    for f in FamilyId::ALL {
        let (a, b, g) = unit_coefficients(f);
        let kp_range = table1_intervals(f).weak_kp;
        for x in draws(f) {
            let p = construct(f, x, a, b, g).unwrap();
            let battery = default_battery(p.l, None);
            let rk = verify(&p, &p.params, p.g, &battery, EquationKind::K, 1e-7).unwrap();
            worst_k = worst_k.max(rk.max_abs_scaled);
            if !rk.passed {
                failures.push(format!("{f}@{x} K {:.1e}", rk.max_abs_scaled));
            }
            if kp_range.contains(x) {
                kp_points += 1;
                let rkp = verify(&p, &p.params, p.g, &battery, EquationKind::KP, 1e-7).unwrap();
                worst_kp = worst_kp.max(rkp.max_abs_scaled);
                if !rkp.passed {
                    failures.push(format!("{f}@{x} KP {:.1e}", rkp.max_abs_scaled));
                }
            }
        }
    }
    let elapsed = t.elapsed();
    outcome(
        failures.is_empty() && elapsed < Duration::from_secs(120),
        format!(
            "42 K points max {worst_k:.1e}, {kp_points} KP points max {worst_kp:.1e}, failures {failures:?}, {:.1}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn weak_only_fixtures() -> Outcome {
    let mut bad = Vec::new();
    for f in [FamilyId::Zsq1, FamilyId::Cos1, FamilyId::Cn2, FamilyId::Sn2, FamilyId::Ratcn6] {
        let rep = classify_family(f, 2.0, 1.0, 1.0, 1.0);
        if !(rep.weak_k && rep.weak_kp.is_some() && !rep.strong_k && !rep.strong_kp) {
            bad.push(format!("{f}: classification {rep:?}"));
            continue;
        }
        let p = match construct(f, 2.0, 1.0, 1.0, 1.0) {
            Ok(p) => p,
            Err(e) => {
                bad.push(format!("{f}: {e}"));
                continue;
            }
        };
        let battery = default_battery(p.l, None);
        for kind in [EquationKind::K, EquationKind::KP] {
            let r = verify(&p, &p.params, p.g, &battery, kind, 1e-7).unwrap();
            if !r.passed {
                bad.push(format!("{f} {kind}: {:.1e}", r.max_abs_scaled));
            }
        }
        let m = p.params.m;
        let expected_m = match f {
            FamilyId::Zsq1 => 1.5,
            FamilyId::Cos1 => 2.0,
            FamilyId::Ratcn6 => 2.5,
            _ => 3.0,
        };
        if m != expected_m {
            bad.push(format!("{f}: m={m}"));
        }
    }
    outcome(bad.is_empty(), format!("5 families at n=2, problems {bad:?}"))
}

fn oracle_equivalence() -> Outcome {
    let mut devs = Vec::new();
    for (f, m) in [(FamilyId::Cos1, 2.0), (FamilyId::Cn2, 3.0)] {
        let closed = construct(f, 2.0, 1.0, 1.0, 1.0).unwrap();
        let nc = shoot(&EquationParams::k(m, 2.0, 1.0, 1.0).unwrap(), 1.0, &ShootOptions::default()).unwrap();
        let u0 = closed.evaluate(0.0);
        // Check on the solver grid and on a finer grid through the dense output.
        let on_grid = nc.grid.iter().zip(&nc.u).map(|(&x, &u)| (u - closed.evaluate(x)).abs());
        let dense = (0..=4000).map(|i| {
            let x = -1.1 * closed.l + 2.2 * closed.l * i as f64 / 4000.0;
            (nc.u_at(x) - closed.evaluate(x)).abs()
        });
        devs.push((f, on_grid.chain(dense).fold(0.0, f64::max) / u0));
    }
    outcome(
        devs.iter().all(|&(_, d)| d < 1e-6),
        devs.iter().map(|(f, d)| format!("{f}: {d:.2e}")).collect::<Vec<_>>().join(", "),
    )
}

fn figure_runs() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (m, n, a, b) in [(2.25, 2.0, 1.0, 1.0), (0.5, 0.9, 1.0, -1.0)] {
        let params = EquationParams::k(m, n, a, b).unwrap();
        let t = Instant::now();
        let nc = match shoot(&params, 1.0, &ShootOptions::default()) {
            Ok(nc) => nc,
            Err(e) => {
                ok = false;
                parts.push(format!("(m={m},n={n}) failed: {e}"));
                continue;
            }
        };
        let elapsed = t.elapsed();
        let v0 = center_amplitude(&coefficients(&params, 1.0).unwrap(), &params).unwrap();
        let closed_form = ((n + m) / (n + 1.0) / a).powf(n / (m - 1.0));
        let v0_err = ((nc.v0 - closed_form) / closed_form).abs().max(((v0 - nc.v0) / v0).abs());
        let cut = nc.scaled_cutoff_residuals();
        let max_cut = cut.iter().cloned().fold(0.0, f64::max);
        let run_ok = v0_err < 1e-10
            && nc.half_width_gap() < 1e-6
            && nc.scaled_energy_residual() < 1e-7
            && max_cut < 1e-6
            && elapsed < Duration::from_secs(5);
        ok &= run_ok;
        parts.push(format!(
            "(m={m},n={n}) V0 err {v0_err:.1e}, L gap {:.1e}, energy {:.1e}, cutoff {max_cut:.1e}, {:.0}ms",
            nc.half_width_gap(),
            nc.scaled_energy_residual(),
            elapsed.as_secs_f64() * 1e3
        ));
    }
    outcome(ok, parts.join("; "))
}

fn endpoint_powers() -> Outcome {
    let mut worst = (0.0f64, String::new());
    let mut ok = true;
    for f in FamilyId::ALL {
        let (a, b, g) = unit_coefficients(f);
        let x = draws(f)[1];
        let p = construct(f, x, a, b, g).unwrap();
        let fit = endpoint_power_fit(&p, p.l).unwrap();
        let expected = f.endpoint_power(x);
        let rel = (fit / expected - 1.0).abs();
        ok &= rel < 0.02;
        if rel > worst.0 {
            worst = (rel, format!("{f}: fit {fit:.4} vs {expected:.4}"));
        }
    }
    outcome(ok, format!("14 families, worst {:.2}% ({})", worst.0 * 100.0, worst.1))
}

fn elliptic_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20261015);
    let (mut real_err, mut imag_err) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let z = rng.gen_range(-20.0..20.0);
        let k = rng.gen_range(0.0..0.999);
        let j = jacobi(z, Modulus::real(k)).unwrap();
        real_err = real_err
            .max((j.sn * j.sn + j.cn * j.cn - 1.0).abs())
            .max((j.dn * j.dn - (1.0 - k * k * j.sn * j.sn)).abs());
        let kappa = rng.gen_range(0.0..3.0);
        let j = jacobi(z, Modulus::imaginary(kappa)).unwrap();
        imag_err = imag_err
            .max((j.sn * j.sn + j.cn * j.cn - 1.0).abs())
            .max((j.dn * j.dn - (1.0 + kappa * kappa * j.sn * j.sn)).abs() / (1.0 + kappa * kappa));
    }
    // K(1/√2) = Γ(1/4)² / (4√π) from the AGM: π / (2 agm(1, 1/√2)).
    let agm = {
        let (mut a, mut b) = (1.0f64, FRAC_1_SQRT_2);
        for _ in 0..8 {
            (a, b) = (0.5 * (a + b), (a * b).sqrt());
        }
        a
    };
    let k_err = (complete_k(Modulus::real(FRAC_1_SQRT_2)).unwrap() - PI / (2.0 * agm)).abs();
    outcome(
        real_err < 1e-12 && imag_err < 1e-10 && k_err < 1e-12,
        format!("real {real_err:.1e}, imaginary {imag_err:.1e}, K(1/sqrt2) {k_err:.1e}"),
    )
}

fn negative_control() -> Outcome {
    let p = construct(FamilyId::Cos1, 2.0, 1.0, 1.0, 1.0).unwrap();
    let cut = Lowered::new(&p, 0.5);
    let battery = default_battery(p.l, None);
    let r = verify(&cut, &p.params, p.g, &battery, EquationKind::K, 1e-7).unwrap();
    let bq = boundary_quantities(&cut, &p.params, p.g, cut.half_width());
    outcome(
        r.max_abs_scaled > 1e-2 && bq.scaled[2] > 1e-2,
        format!("max scaled residual {:.2e}, A3 limit (scaled) {:.2e}", r.max_abs_scaled, bq.scaled[2]),
    )
}

fn inconsistency_audits() -> Outcome {
    let params = EquationParams::k(2.25, 2.0, 1.0, 1.0).unwrap();
    let half = shoot(&params, 1.0, &ShootOptions::default()).unwrap().scaled_energy_residual();
    let two = shoot(
        &params,
        1.0,
        &ShootOptions {
            force: ForceFactor::Two,
            ..Default::default()
        },
    )
    .unwrap()
    .scaled_energy_residual();
    let (a, b, g) = (1.0, -0.5, 2.0);
    let cos2 = construct(FamilyId::Cos2, 0.5, a, b, g).unwrap();
    let ratio = cos2.printed_half_width().unwrap() / cos2.l;
    let predicted = g.abs() / b.abs();
    let ratio_ok = (ratio / predicted - 1.0).abs() < 1e-9;
    outcome(
        half < 1e-7 && two > 1e-1 && ratio_ok,
        format!("energy factor 1/2 {half:.1e}, factor 2 {two:.2e}; COS2 printed/actual L {ratio:.6} vs |g|/|b| {predicted}"),
    )
}

// Runs without the libtest harness so the criterion lines are always shown.
fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("existence table", table_reproduction),
        ("cosine fixture", intro_fixture),
        ("weak residual suite", weak_residual_suite),
        ("weak-only fixtures", weak_only_fixtures),
        ("numeric vs closed form", oracle_equivalence),
        ("numeric runs outside the catalog", figure_runs),
        ("endpoint power recovery", endpoint_powers),
        ("elliptic identities", elliptic_identities),
        ("negative control", negative_control),
        ("printed-formula audits", inconsistency_audits),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = check();
        println!(
            "[{}] {:>2} {name}: {} ({:.2}s)",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            t.elapsed().as_secs_f64()
        );
        if !o.passed {
            failed.push(i + 1);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
