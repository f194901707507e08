use num_complex::Complex64;
use proptest::prelude::*;
use symexpr::*;

fn vars() -> Vec<Variable> {
    vec![Variable::x(1, 1), Variable::z(1, 1), Variable::z(2, 1)]
}

fn params() -> Params {
    Params::new()
        .with(Sym::G(1), 0.7)
        .with(Sym::G(2), 1.3)
        .with(Sym::Sigma(2), 0.9)
        .with(Sym::A, 0.3)
        .with(Sym::Lambda(1), 0.45)
}

fn arb_scalar() -> impl Strategy<Value = ScalarExpr> {
    let atom = prop_oneof![
        (-3i64..=3).prop_map(ScalarExpr::from_int),
        (1i64..=4, 1i64..=3).prop_map(|(p, q)| ScalarExpr::from_ratio(p, q)),
        Just(ScalarExpr::g(1)),
        Just(ScalarExpr::g(2)),
        Just(ScalarExpr::sigma(2)),
        Just(ScalarExpr::a()),
        Just(ScalarExpr::iota()),
    ];
    atom.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.add(&b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.mul(&b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.sub(&b)),
            (inner.clone(), inner).prop_map(|(a, b)| a.div(&b).unwrap_or(a)),
        ]
    })
}

fn arb_form() -> impl Strategy<Value = LinearForm> {
    prop::collection::vec(-2i64..=2, 3).prop_map(|cs| {
        let vs = vars();
        LinearForm::from_terms(&vs.iter().zip(cs).map(|(v, c)| (*v, c)).collect::<Vec<_>>())
    })
}

fn arb_coeff() -> impl Strategy<Value = ScalarExpr> {
    prop_oneof![
        (-2i64..=2).prop_filter("nonzero", |c| *c != 0).prop_map(ScalarExpr::from_int),
        Just(ScalarExpr::g(1).neg()),
        Just(ScalarExpr::sigma(2)),
        Just(ScalarExpr::from_ratio(1, 2)),
    ]
}

fn arb_kernel() -> impl Strategy<Value = KernelExpr> {
    let exp_terms = prop::collection::vec((arb_coeff(), arb_form()), 0..3);
    let planes = prop::collection::vec((arb_coeff(), arb_form()), 0..2);
    let bins = prop::collection::vec(
        (
            prop_oneof![Just(ScalarExpr::from_int(-1)), Just(ScalarExpr::one()), Just(ScalarExpr::g(1))],
            arb_form().prop_filter("nonconstant", |l| !l.is_zero()),
            prop_oneof![Just(ScalarExpr::a()), Just(ScalarExpr::from_ratio(1, 2)), Just(ScalarExpr::iota().mul(&ScalarExpr::a()))],
        ),
        0..3,
    );
    (exp_terms, planes, bins).prop_map(|(e, pw, b)| {
        let mut k = KernelExpr::one();
        for (c, l) in e {
            k = k.exp_term(c, l);
        }
        for (c, l) in pw {
            k = k.plane(&c, &l);
        }
        for (s, l, p) in b {
            k = k.binomial(s, l, p);
        }
        k
    })
}

fn arb_point() -> impl Strategy<Value = Point> {
    prop::collection::vec((-0.8f64..0.8, 0.15f64..0.6), 3).prop_map(|xs| {
        vars().into_iter().zip(xs).map(|(v, (re, im))| (v, Complex64::new(re, im))).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_field_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
        prop_assert_eq!(a.add(&b).sub(&b), a.clone());
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        if !b.is_zero() {
            prop_assert_eq!(a.mul(&b).div(&b).unwrap(), a.clone());
        }
    }

    #[test]
    fn scalar_eval_is_homomorphic(a in arb_scalar(), b in arb_scalar()) {
        let p = params().with(Sym::G(2), 2.0 * 0.9 * 0.9);
        let (va, vb) = (a.eval(&p).unwrap(), b.eval(&p).unwrap());
        let prod = a.mul(&b).eval(&p).unwrap();
        let sum = a.add(&b).eval(&p).unwrap();
        let tol = 1e-9 * (1.0 + va.norm() * vb.norm() + va.norm() + vb.norm());
        if va.is_finite() && vb.is_finite() {
            prop_assert!((prod - va * vb).norm() < tol);
            prop_assert!((sum - va - vb).norm() < tol);
        }
    }

    #[test]
    fn substitution_commutes_with_evaluation(a in arb_scalar()) {
        let map = bindings([(Sym::G(1), ScalarExpr::from_ratio(7, 10)), (Sym::A, ScalarExpr::g(2))]);
        let p = params().with(Sym::G(2), 2.0 * 0.81).with(Sym::A, 2.0 * 0.81);
        let lhs = a.substitute(&map).unwrap().eval(&p).unwrap();
        let rhs = a.eval(&p).unwrap();
        if lhs.is_finite() && rhs.is_finite() {
            prop_assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn kernel_mul_is_associative_and_commutative(a in arb_kernel(), b in arb_kernel(), c in arb_kernel()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&KernelExpr::one()), a.clone());
    }

    #[test]
    fn mixed_partials_commute(k in arb_kernel(), i in 0usize..3, j in 0usize..3) {
        let (u, v) = (vars()[i], vars()[j]);
        let du = k.dlog(u).unwrap();
        let dv = k.dlog(v).unwrap();
        let lhs = dv.deriv(u).add(&du.mul(&dv));
        let rhs = du.deriv(v).add(&dv.mul(&du));
        prop_assert!(lhs.sub(&rhs).is_zero().unwrap());
    }

    #[test]
    fn dlog_matches_finite_difference(k in arb_kernel(), i in 0usize..3, pt in arb_point()) {
        let v = vars()[i];
        let p = params();
        let h = 1e-5;
        let mut plus = pt.clone();
        let mut minus = pt.clone();
        *plus.get_mut(&v).unwrap() += h;
        *minus.get_mut(&v).unwrap() -= h;
        let base = k.eval_log(&p, &pt).unwrap();
        let mut fd = (k.eval_log(&p, &plus).unwrap() - k.eval_log(&p, &minus).unwrap()) / (2.0 * h);
        // principal-branch logs may jump by 2πi between the two stencil points
        let jump = (fd.im * 2.0 * h / (2.0 * std::f64::consts::PI)).round();
        fd.im -= jump * 2.0 * std::f64::consts::PI / (2.0 * h);
        let exact = k.dlog(v).unwrap().eval(&p, &pt).unwrap();
        prop_assume!(base.is_finite());
        prop_assert!((fd - exact).norm() <= 1e-6 * (1.0 + exact.norm()), "fd {} exact {}", fd, exact);
    }

    #[test]
    fn certified_zero_vanishes_numerically(k in arb_kernel(), i in 0usize..3, j in 0usize..3, pt in arb_point()) {
        let (u, v) = (vars()[i], vars()[j]);
        let du = k.dlog(u).unwrap();
        let dv = k.dlog(v).unwrap();
        let r = dv.deriv(u).sub(&du.deriv(v));
        prop_assert!(r.is_zero().unwrap());
        let p = params();
        let scale = dv.deriv(u).eval_scale(&p, &pt).unwrap().max(1.0);
        prop_assert!(r.eval(&p, &pt).unwrap().norm() < 1e-10 * scale);
    }

    #[test]
    fn split_normalization_is_confluent(e1 in 1i64..=3, e2 in 1i64..=3, p in arb_coeff(), q in arb_coeff()) {
        let z = Variable::z(1, 1);
        let raw = [(ScalarExpr::from_int(-1), LinearForm::term(z, 2 * e1), p.clone()), (ScalarExpr::from_int(-1), LinearForm::term(z, 2 * e2), q.clone())];
        let joint = raw.iter().fold(KernelExpr::one(), |k, (s, l, x)| k.binomial(s.clone(), l.clone(), x.clone()));
        let a = KernelExpr::one().binomial(raw[0].0.clone(), raw[0].1.clone(), p);
        let b = KernelExpr::one().binomial(raw[1].0.clone(), raw[1].1.clone(), q);
        prop_assert_eq!(a.mul(&b), joint);
    }
}
