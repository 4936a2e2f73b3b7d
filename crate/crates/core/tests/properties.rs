use approx::relative_eq;
use compacton::elliptic::{complete_k, inverse_cn, jacobi, Modulus};
use compacton::existence::{classify_family, table1_intervals, unit_coefficients};
use compacton::numeric::{center_amplitude, coefficients, half_width_quadrature, shoot, ShootOptions};
use compacton::profile::{construct, EquationParams, FamilyId};
use compacton::quadrature::TanhSinh;
use compacton::weak::{residual_k, residual_kp, Combination, TestFn, TestFunction};
use proptest::prelude::*;

fn family() -> impl Strategy<Value = FamilyId> {
    proptest::sample::select(FamilyId::ALL.to_vec())
}

/// A family together with a free power strictly inside its weak-K range.
fn admissible() -> impl Strategy<Value = (FamilyId, f64)> {
    (family(), 0.05f64..0.95).prop_map(|(f, t)| {
        let (lo, hi) = table1_intervals(f).weak_k.endpoints();
        let hi = if hi.is_finite() { hi } else { lo + 3.0 };
        (f, lo + (hi - lo) * t)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn jacobi_identities_real(z in -50.0f64..50.0, k in 0.0f64..0.9999) {
        let j = jacobi(z, Modulus::real(k)).unwrap();
        prop_assert!((j.sn * j.sn + j.cn * j.cn - 1.0).abs() < 1e-12);
        prop_assert!((j.dn * j.dn - 1.0 + k * k * j.sn * j.sn).abs() < 1e-12);
    }

    #[test]
    fn jacobi_identities_imaginary(z in -20.0f64..20.0, kappa in 0.0f64..4.0) {
        let j = jacobi(z, Modulus::imaginary(kappa)).unwrap();
        prop_assert!((j.sn * j.sn + j.cn * j.cn - 1.0).abs() < 1e-10);
        let scale = 1.0 + kappa * kappa;
        prop_assert!((j.dn * j.dn - 1.0 - kappa * kappa * j.sn * j.sn).abs() < 1e-10 * scale);
    }
}

proptest! {
    #[test]
    fn jacobi_is_quarter_periodic(k in 0.0f64..0.99, z in -3.0f64..3.0) {
        let m = Modulus::real(k);
        let kk = complete_k(m).unwrap();
        let a = jacobi(z, m).unwrap();
        let b = jacobi(z + 4.0 * kk, m).unwrap();
        prop_assert!((a.sn - b.sn).abs() < 1e-11 && (a.cn - b.cn).abs() < 1e-11);
    }

    #[test]
    fn inverse_cn_round_trips(k in 0.0f64..0.99, x in -0.999f64..1.0) {
        let m = Modulus::real(k);
        let z = inverse_cn(x, m).unwrap();
        prop_assert!((jacobi(z, m).unwrap().cn - x).abs() < 1e-12);
    }

    #[test]
    fn tanh_sinh_matches_beta_integral(a in 0.05f64..3.0, b in 0.05f64..3.0) {
        // ∫₀¹ x^{a−1}(1−x)^{b−1} dx
        let r = TanhSinh::new(1e-12, 0.0)
            .integrate(|nd| nd.from_left.powf(a - 1.0) * nd.from_right.powf(b - 1.0), 0.0, 1.0)
            .unwrap();
        let exact = statrs::function::beta::beta(a, b);
        prop_assert!(relative_eq!(r.value, exact, max_relative = 1e-9), "{} vs {}", r.value, exact);
    }

    #[test]
    fn reduced_coefficients_depend_on_ratios(m in 0.1f64..4.0, n in 0.2f64..4.0, a in 0.1f64..5.0, b in 0.1f64..5.0, g in 0.1f64..5.0, s in prop_oneof![Just(-1.0), Just(1.0)]) {
        prop_assume!((m - 1.0).abs() > 1e-3);
        let p = EquationParams::k(m, n, a, b).unwrap();
        let q = EquationParams::k(m, n, s * a, s * b).unwrap();
        let c = coefficients(&p, g).unwrap();
        let d = coefficients(&q, s * g).unwrap();
        prop_assert!(relative_eq!(c.a, d.a, max_relative = 1e-14) && relative_eq!(c.b, d.b, max_relative = 1e-14));
        prop_assert_eq!((c.e, c.c), (0.0, 0.0));
        // V₀ is the nonzero root of the first integral.
        let v0 = center_amplitude(&c, &p).unwrap();
        let e = c.b * v0.powf(1.0 + 1.0 / n) - c.a * v0.powf(1.0 + m / n);
        prop_assert!(e.abs() <= 1e-12 * (c.b * v0.powf(1.0 + 1.0 / n)).abs());
    }

    #[test]
    fn profiles_are_even_and_compact((f, x) in admissible(), t in 0.0f64..1.0) {
        let (a, b, g) = unit_coefficients(f);
        let p = construct(f, x, a, b, g).unwrap();
        let xi = t * p.l;
        prop_assert_eq!(p.evaluate(xi), p.evaluate(-xi));
        prop_assert!(p.evaluate(xi) >= 0.0);
        prop_assert_eq!(p.evaluate(p.l * (1.0 + t)), 0.0);
        prop_assert!(p.evaluate(0.0) >= p.evaluate(xi));
    }

    #[test]
    fn classification_agrees_with_table((f, x) in admissible()) {
        let (a, b, g) = unit_coefficients(f);
        let row = table1_intervals(f);
        let rep = classify_family(f, x, a, b, g);
        prop_assert!(rep.weak_k);
        prop_assert_eq!(rep.strong_k, row.strong_k.contains(x));
        prop_assert_eq!(rep.weak_kp.is_some(), row.weak_kp_raw.contains(x));
        prop_assert_eq!(rep.strong_kp, row.strong_kp.contains(x));
        // Strong implies weak, and KP admissibility implies K admissibility.
        prop_assert!(!rep.strong_k || rep.weak_k);
        prop_assert!(!rep.strong_kp || rep.weak_kp.is_some());
        prop_assert!(rep.weak_kp.is_none() || rep.weak_k);
    }

    #[test]
    fn test_function_vanishes_outside_support(c in -5.0f64..5.0, w in 0.1f64..3.0, d in 0u32..4, s in 1.0f64..3.0, order in 0usize..5) {
        let tf = TestFunction::new(c, w, d).unwrap();
        prop_assert_eq!(tf.derivative(c + s * w, order).unwrap(), 0.0);
        prop_assert_eq!(tf.derivative(c - s * w, order).unwrap(), 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn residuals_vanish_for_disjoint_supports((f, x) in admissible(), gap in 0.0f64..2.0, w in 0.1f64..1.0, right in any::<bool>()) {
        let (a, b, g) = unit_coefficients(f);
        let p = construct(f, x, a, b, g).unwrap();
        let c = (p.l + w * p.l + gap * p.l) * if right { 1.0 } else { -1.0 };
        let tf = TestFunction::new(c, w * p.l, 1).unwrap();
        prop_assert_eq!(residual_k(&p, &p.params, p.g, &tf).unwrap().value, 0.0);
        prop_assert_eq!(residual_kp(&p, &p.params, p.g, &tf).unwrap().value, 0.0);
    }

    #[test]
    fn residual_is_linear(alpha in -3.0f64..3.0, c1 in -1.2f64..1.2, c2 in -1.2f64..1.2, w1 in 0.3f64..1.2, w2 in 0.3f64..1.2) {
        let p = construct(FamilyId::Cos1, 2.0, 1.0, 1.0, 1.0).unwrap();
        let g = 0.7; // not the profile's own g, so the residuals are nonzero
        let t1 = TestFunction::new(c1 * p.l, w1 * p.l, 0).unwrap();
        let t2 = TestFunction::new(c2 * p.l, w2 * p.l, 1).unwrap();
        let r1 = residual_k(&p, &p.params, g, &t1).unwrap();
        let r2 = residual_k(&p, &p.params, g, &t2).unwrap();
        let rc = residual_k(&p, &p.params, g, &Combination(vec![(alpha, t1), (1.0, t2)])).unwrap();
        let tol = 1e-9 * (alpha.abs() * r1.scale + r2.scale);
        prop_assert!((rc.value - alpha * r1.value - r2.value).abs() <= tol);
    }

    #[test]
    fn weak_solutions_are_weak_for_both_forms((f, x) in admissible(), c in -1.5f64..1.5, w in 0.2f64..1.2, d in 0u32..2) {
        let (a, b, g) = unit_coefficients(f);
        let p = construct(f, x, a, b, g).unwrap();
        let tf = TestFunction::new(c * p.l, w * p.l, d).unwrap();
        prop_assert!(residual_k(&p, &p.params, p.g, &tf).unwrap().scaled() < 1e-7);
        if table1_intervals(f).weak_kp_raw.contains(x) {
            prop_assert!(residual_kp(&p, &p.params, p.g, &tf).unwrap().scaled() < 1e-7);
        }
    }

    #[test]
    fn shooting_conserves_and_agrees(m in prop_oneof![1.2f64..4.0, 0.05f64..0.8], n in 0.3f64..3.0) {
        // A symmetric compacton needs V'² ~ V^σ with σ < 2 at the cutoff.
        let sigma = if m > 1.0 { 1.0 + 1.0 / n } else { 1.0 + m / n };
        prop_assume!(sigma < 1.95);
        let b = if m > 1.0 { 1.0 } else { -1.0 };
        let params = EquationParams::k(m, n, 1.0, b).unwrap();
        let nc = shoot(&params, 1.0, &ShootOptions { grid_points: 401, ..Default::default() }).unwrap();
        prop_assert!(nc.half_width_gap() < 1e-6, "gap {}", nc.half_width_gap());
        prop_assert!(nc.scaled_energy_residual() < 1e-7);
        let mid = nc.v.len() / 2;
        prop_assert!(nc.v[mid..nc.v.len() - 1].windows(2).all(|w| w[1] < w[0]));
        let c = coefficients(&params, 1.0).unwrap();
        let l = half_width_quadrature(&c, &params, nc.v0).unwrap();
        prop_assert_eq!(l, nc.l_quadrature);
    }
}

#[test]
fn kp_residual_follows_from_k_for_strong_solutions() {
    // A strong K solution differentiated once more solves the KP ODE.
    for f in FamilyId::ALL {
        let (lo, hi) = table1_intervals(f).strong_kp.endpoints();
        let hi = if hi.is_finite() { hi } else { lo + 1.0 };
        let x = 0.5 * (lo + hi);
        let (a, b, g) = unit_coefficients(f);
        let p = construct(f, x, a, b, g).unwrap();
        for c in [-0.9, 0.0, 0.7] {
            let tf = TestFunction::new(c * p.l, 0.6 * p.l, 1).unwrap();
            assert!(residual_k(&p, &p.params, p.g, &tf).unwrap().scaled() < 1e-7, "{f}");
            assert!(residual_kp(&p, &p.params, p.g, &tf).unwrap().scaled() < 1e-7, "{f}");
        }
    }
}
