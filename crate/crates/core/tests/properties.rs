//! Property-based checks of the algebraic core and the special-function
//! functional equations.

use num_complex::Complex64;
use proptest::prelude::*;

use qriccati::algebra::{
    roots, ExactComplexRational, Polynomial, RationalFunction, DEFAULT_ROOT_TOL,
};
use qriccati::linear::{factor_coefficient, solve_constant_case};
use qriccati::qspecial::{gamma_q_z, qpochhammer_inf, EvalRequest, QBase};

fn scalar() -> impl Strategy<Value = ExactComplexRational> {
    (-20i64..=20, 1i64..=12, -20i64..=20, 1i64..=12)
        .prop_map(|(a, b, c, d)| ExactComplexRational::from_ratios(a, b, c, d))
}

fn nonzero_scalar() -> impl Strategy<Value = ExactComplexRational> {
    scalar().prop_filter("nonzero", |s| !s.is_zero())
}

fn poly(max_deg: usize) -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec(scalar(), 0..=max_deg + 1).prop_map(Polynomial::new)
}

fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = Polynomial> {
    poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

fn rational_fn() -> impl Strategy<Value = RationalFunction> {
    (poly(4), nonzero_poly(3))
        .prop_map(|(n, d)| RationalFunction::new(n, d).expect("nonzero denominator"))
}

proptest! {
    #[test]
    fn scalar_field_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, ExactComplexRational::zero());
    }

    #[test]
    fn scalar_inverse_roundtrip(a in nonzero_scalar()) {
        let inv = a.checked_inv().unwrap();
        prop_assert_eq!(&a * &inv, ExactComplexRational::one());
        prop_assert_eq!(a.checked_pow(-3).unwrap(),
                        inv.checked_pow(3).unwrap());
    }

    #[test]
    fn polynomial_ring_laws(p in poly(5), q in poly(5), r in poly(4)) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
    }

    #[test]
    fn polynomial_divmod_reconstructs(p in poly(6), d in nonzero_poly(3)) {
        let (quot, rem) = p.divmod(&d).unwrap();
        prop_assert_eq!(&(&quot * &d) + &rem, p);
        if let (Some(rd), Some(dd)) = (rem.degree(), d.degree()) {
            prop_assert!(rd < dd || dd == 0);
        }
    }

    #[test]
    fn rational_function_normalization_is_canonical(
        f in rational_fn(),
        c in nonzero_poly(2),
    ) {
        // Scaling numerator and denominator by a common factor does not
        // change the canonical form.
        let scaled = RationalFunction::new(f.num() * &c, f.den() * &c).unwrap();
        prop_assert_eq!(&scaled, &f);
        // The canonical denominator is monic and coprime to the numerator.
        if !f.is_zero() {
            prop_assert_eq!(
                f.den().leading_coeff().cloned(),
                Some(ExactComplexRational::one())
            );
            let g = f.num().gcd(f.den());
            prop_assert_eq!(g.degree(), Some(0));
        }
    }

    #[test]
    fn dilation_composes(f in rational_fn()) {
        let q1 = ExactComplexRational::from_ratio(1, 2);
        let q2 = ExactComplexRational::from_ratios(-1, 3, 1, 5);
        let both = f.q_dilate(&q1).unwrap().q_dilate(&q2).unwrap();
        let direct = f.q_dilate(&(&q1 * &q2)).unwrap();
        prop_assert_eq!(both, direct);
    }

    #[test]
    fn divided_difference_is_linear(
        f in rational_fn(),
        g in rational_fn(),
        a in scalar(),
        b in scalar(),
    ) {
        let q = ExactComplexRational::from_ratio(-2, 3);
        let lhs = (&f.mul_scalar(&a) + &g.mul_scalar(&b)).delta_q(&q).unwrap();
        let rhs = &f.delta_q(&q).unwrap().mul_scalar(&a)
            + &g.delta_q(&q).unwrap().mul_scalar(&b);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exact_and_numeric_evaluation_agree(
        f in rational_fn(),
        zn in -8i64..=8,
        zd in 1i64..=6,
    ) {
        let z = ExactComplexRational::from_ratio(zn, zd);
        if let Some(exact) = f.eval_exact(&z) {
            let ev = exact.to_complex64();
            let numeric = f.eval(z.to_complex64());
            if let Some(nv) = numeric.finite() {
                // Relative agreement, with headroom for cancellation in
                // ill-conditioned spots.
                let scale = ev.norm().max(1.0);
                if ev.norm() < 1e12 && f.den().eval_complex(z.to_complex64()).norm() > 1e-6 {
                    prop_assert!(
                        (ev - nv).norm() <= 1e-9 * scale,
                        "exact {ev} vs numeric {nv}"
                    );
                }
            }
        }
    }
}

#[test]
fn roots_of_well_separated_products_are_recovered() {
    // Deterministic panel: build polynomials from known well-separated
    // roots, then demand recovery within tolerance and small residuals.
    let panels: Vec<Vec<ExactComplexRational>> = vec![
        vec![
            ExactComplexRational::from_i64(1),
            ExactComplexRational::from_i64(-2),
            ExactComplexRational::from_ratio(7, 2),
        ],
        vec![
            ExactComplexRational::from_ratios(0, 1, 1, 1),
            ExactComplexRational::from_ratios(0, 1, -1, 1),
            ExactComplexRational::from_i64(3),
            ExactComplexRational::from_ratio(-5, 4),
        ],
        (0..12)
            .map(|k| ExactComplexRational::from_ratios(k - 6, 2, (k % 3) - 1, 3))
            .collect(),
    ];
    for known in panels {
        let p = Polynomial::from_roots(&known);
        let clusters = roots(&p, DEFAULT_ROOT_TOL).unwrap();
        let total: usize = clusters.iter().map(|c| c.multiplicity).sum();
        assert_eq!(total, known.len());
        let coeffs = p.to_complex_coeffs();
        for c in &clusters {
            let val = qriccati::algebra::Polynomial::new(vec![]).is_zero();
            let _ = val;
            let mut acc = Complex64::new(0.0, 0.0);
            for a in coeffs.iter().rev() {
                acc = acc * c.value + a;
            }
            let scale: f64 = coeffs.iter().map(|a| a.norm()).sum();
            assert!(acc.norm() <= 1e-7 * scale.max(1.0), "residual {}", acc.norm());
        }
        for r in &known {
            let rv = r.to_complex64();
            let hit = clusters
                .iter()
                .any(|c| (c.value - rv).norm() <= 1e-6 * (1.0 + rv.norm()));
            assert!(hit, "root {rv} not recovered");
        }
    }
}

#[test]
fn factor_coefficient_reconstructs_product_form() {
    // 100 deterministic cases: a(z) = c·∏(1-z/αᵢ)/∏(1-z/βⱼ) recovers c
    // and the root sets.
    let mut state = 0x2468_ace1_u64;
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 33) as i64 % 9) - 4
    };
    let mut cases = 0;
    while cases < 100 {
        let c = ExactComplexRational::from_ratios(next(), 3, next(), 5);
        if c.is_zero() {
            continue;
        }
        let nz = (next().rem_euclid(3)) as usize;
        let np = (next().rem_euclid(3)) as usize;
        let mut num = Polynomial::constant(c.clone());
        let mut den = Polynomial::one();
        let mut zeros = Vec::new();
        let mut poles = Vec::new();
        let mut ok = true;
        for _ in 0..nz {
            let alpha = ExactComplexRational::from_ratios(next(), 2, next(), 3);
            if alpha.is_zero() {
                ok = false;
                break;
            }
            zeros.push(alpha.to_complex64());
            // factor (1 - z/α)
            let inv = alpha.checked_inv().unwrap();
            num = &num
                * &Polynomial::new(vec![
                    ExactComplexRational::one(),
                    -&inv,
                ]);
        }
        for _ in 0..np {
            let beta = ExactComplexRational::from_ratios(next(), 2, next(), 7);
            if beta.is_zero() {
                ok = false;
                break;
            }
            poles.push(beta.to_complex64());
            let inv = beta.checked_inv().unwrap();
            den = &den
                * &Polynomial::new(vec![
                    ExactComplexRational::one(),
                    -&inv,
                ]);
        }
        if !ok || (nz == 0 && np == 0) {
            continue;
        }
        // Shared roots would cancel in the canonical form; skip those.
        let shared = zeros
            .iter()
            .any(|a| poles.iter().any(|b| (a - b).norm() < 1e-9));
        if shared {
            continue;
        }
        let a = RationalFunction::new(num, den).unwrap();
        let (c_got, zeros_got, poles_got) = factor_coefficient(&a, 1e-8).unwrap();
        assert!(
            (c_got - c.to_complex64()).norm() <= 1e-8 * (1.0 + c_got.norm()),
            "constant mismatch {c_got}"
        );
        assert_eq!(zeros_got.len(), zeros.len());
        assert_eq!(poles_got.len(), poles.len());
        for z in &zeros {
            assert!(
                zeros_got.iter().any(|g| (g - z).norm() <= 1e-6 * (1.0 + z.norm())),
                "zero {z} missing"
            );
        }
        for p in &poles {
            assert!(
                poles_got.iter().any(|g| (g - p).norm() <= 1e-6 * (1.0 + p.norm())),
                "pole {p} missing"
            );
        }
        cases += 1;
    }
}

#[test]
fn constant_case_matches_exhaustive_power_scan() {
    let bases = [
        ExactComplexRational::from_ratio(1, 2),
        ExactComplexRational::from_ratio(-1, 2),
        ExactComplexRational::from_ratio(3, 10),
        ExactComplexRational::from_ratios(1, 5, 3, 10),
    ];
    for qe in bases {
        let q = QBase::from_exact(qe.clone()).unwrap();
        for m in -24i64..=24 {
            let c = qe.checked_pow(m).unwrap();
            let result = solve_constant_case(c.to_complex64(), &q, 1e-9).unwrap();
            assert!(result.solvable_in_rationals, "q^{m} not detected");
            assert_eq!(result.exponent, Some(m));
        }
        // A constant that is provably no integer power: scale q^3 by 7/5.
        let c = &qe.checked_pow(3).unwrap()
            * &ExactComplexRational::from_ratio(7, 5);
        let mut is_power = false;
        for m in -64i64..=64 {
            if qe.checked_pow(m).unwrap() == c {
                is_power = true;
            }
        }
        assert!(!is_power);
        let result = solve_constant_case(c.to_complex64(), &q, 1e-9).unwrap();
        assert!(!result.solvable_in_rationals);
        assert_eq!(result.exponent, None);
    }
}

#[test]
fn pochhammer_and_gamma_functional_equations_hold_on_panels() {
    let req = EvalRequest::new(1e-12, 1e-9).unwrap();
    let bases = [
        Complex64::new(0.5, 0.0),
        Complex64::new(-0.5, 0.0),
        Complex64::new(0.3, 0.0),
        Complex64::new(0.2, 0.3),
    ];
    for qn in bases {
        let q = QBase::from_complex(qn).unwrap();
        let mut checked = 0;
        let mut k = 0u32;
        while checked < 1000 {
            // Deterministic low-discrepancy samples in a disk of radius 3.
            k += 1;
            let t = k as f64 * 0.618_033_988_749_894_9;
            let r = 3.0 * ((k as f64 * 0.382_f64).fract().sqrt());
            let z = Complex64::from_polar(
                r.max(1e-3),
                2.0 * std::f64::consts::PI * t.fract(),
            );
            // (a; q)∞ = (1-a)·(aq; q)∞
            let lhs = qpochhammer_inf(z, &q, &req).unwrap();
            let rhs = (Complex64::new(1.0, 0.0) - z)
                * qpochhammer_inf(z * qn, &q, &req).unwrap();
            let scale = lhs.norm().max(rhs.norm()).max(1e-3);
            assert!(
                (lhs - rhs).norm() <= 1e-9 * scale,
                "pochhammer recurrence failed at z = {z}, q = {qn}"
            );
            // γ_q(qz) = (1-z)·γ_q(z) away from the pole lattice.
            let gz = gamma_q_z(z, &q, &req).unwrap();
            let gqz = gamma_q_z(qn * z, &q, &req).unwrap();
            if let (Some(gz), Some(gqz)) = (gz.finite(), gqz.finite()) {
                let rhs = (Complex64::new(1.0, 0.0) - z) * gz;
                let scale = gqz.norm().max(rhs.norm()).max(1e-6);
                assert!(
                    (gqz - rhs).norm() <= 1e-8 * scale,
                    "gamma recurrence failed at z = {z}, q = {qn}"
                );
            }
            checked += 1;
        }
    }
}
