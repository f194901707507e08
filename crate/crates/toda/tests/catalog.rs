use symexpr::*;
use toda::*;

fn e(c: ScalarExpr, t: &[(Variable, i64)]) -> RatExp {
    RatExp::from_exppoly(ExpPoly::monomial(c, LinearForm::from_terms(t)))
}

fn same(a: &RatExp, b: &RatExp) -> bool {
    a.sub(b).is_zero().unwrap()
}

fn generic(s: Series, n: u32) -> SchrodingerOp {
    let id = SystemId::new(s, n);
    build_hamiltonian(&id, &Couplings::generic(&id), None).unwrap()
}

#[test]
fn bc_rank_two() {
    let h = generic(Series::BC, 2);
    let (x1, x2) = (Variable::x(2, 1), Variable::x(2, 2));
    let want = e(ScalarExpr::g(1), &[(x1, 1)]).add(&e(ScalarExpr::g(2), &[(x1, 2)])).add(&e(ScalarExpr::g(3), &[(x2, 1), (x1, -1)]));
    assert_eq!(h.vars, vec![x1, x2]);
    assert!(same(&h.potential, &want));
    assert!(h.shift.is_zero());
}

#[test]
fn bc_star_rank_one() {
    let h = generic(Series::BCstar, 1);
    let z = Variable::z(1, 1);
    let g = ScalarExpr::g(1);
    let half = ScalarExpr::from_ratio(1, 2);
    let want = e(g.mul(&half).neg(), &[(z, 1)]).add(&e(g.mul(&g).mul(&half), &[(z, 2)]));
    assert!(same(&h.potential, &want));
}

#[test]
fn affine_a1_rank_one() {
    let h = generic(Series::A1aff, 1);
    let (x1, x2) = (Variable::x(2, 1), Variable::x(2, 2));
    let want = e(ScalarExpr::g(1), &[(x1, 1), (x2, -1)]).add(&e(ScalarExpr::g(2), &[(x2, 1), (x1, -1)]));
    assert!(same(&h.potential, &want));
}

#[test]
fn inozemtsev_boundary_coupling() {
    let h = generic(Series::I, 2);
    let (z1, z2) = (Variable::z(2, 1), Variable::z(2, 2));
    let two = ScalarExpr::from_int(2);
    let ia = ScalarExpr::iota().mul(&ScalarExpr::a());
    let c = ScalarExpr::g(1).div(&two.mul(&ScalarExpr::sigma(2))).unwrap();
    let t1 = two.mul(&ia).add(&ScalarExpr::one()).mul(&c).neg();
    let s = ia.add(&c);
    let t2 = two.mul(&s).add(&two.mul(&s.mul(&s)));
    let sinh2 = |t: ScalarExpr, k: i64| {
        let l = LinearForm::term(z1, k);
        RatExp::fraction(ExpPoly::monomial(t, l.clone()), &BinomBase::minus(l), 2).unwrap()
    };
    let g3s2 = ScalarExpr::g(3).mul(&ScalarExpr::sigma(2));
    let want = sinh2(t1, 1)
        .add(&sinh2(t2, 2))
        .add(&e(g3s2.clone(), &[(z1, 1), (z2, 1)]))
        .add(&e(g3s2, &[(z2, 1), (z1, -1)]));
    assert!(same(&h.potential, &want));

    // numeric value of the first tilde coupling at g1 = 1, g2 = 2, a = 1/4
    let p = Params::new().with(Sym::G(1), 1.0).with(Sym::G(2), 2.0).with(Sym::Sigma(2), 1.0).with(Sym::A, 0.25);
    let t1 = two.mul(&ia).add(&ScalarExpr::one()).mul(&c).neg().eval(&p).unwrap();
    assert!((t1 - num_complex::Complex64::new(-0.5, -0.25)).norm() < 1e-15);
}

#[test]
fn root_examples() {
    let coords = |s, n| simple_roots(&SystemId::new(s, n)).unwrap().into_iter().map(|r| (r.coords, r.nonreduced)).collect::<Vec<_>>();
    assert_eq!(coords(Series::B, 3), vec![(vec![1, 0, 0], false), (vec![-1, 1, 0], false), (vec![0, -1, 1], false)]);
    assert_eq!(coords(Series::BC, 2), vec![(vec![1, 0], false), (vec![2, 0], true), (vec![-1, 1], false)]);
    assert_eq!(coords(Series::D2aff, 2), vec![(vec![1, 0], false), (vec![-1, 1], false), (vec![0, -1], false)]);
}

#[test]
fn dynkin_b3_has_one_double_bond() {
    let d = describe(&SystemId::new(Series::B, 3)).unwrap();
    let lines: Vec<i64> = d.dynkin.iter().map(|e| e.lines).collect();
    assert_eq!(lines, vec![2, 1]);
    assert_eq!(d.dynkin[0].arrow_to, Some(0));
}

#[test]
fn root_terms_match_potential_exponents() {
    for d in list_systems(4) {
        if d.roots.iter().any(|r| r.trigonometric) || d.id.series == Series::Free {
            continue;
        }
        let h = build_hamiltonian(&d.id, &Couplings::generic(&d.id), None).unwrap();
        let vars = h.vars.clone();
        let mut exps: Vec<Vec<i64>> = h
            .exp_terms()
            .iter()
            .map(|(l, _)| vars.iter().map(|v| *l.coeff(*v).numer()).collect())
            .filter(|c: &Vec<i64>| c.iter().any(|x| *x != 0))
            .collect();
        let mut roots: Vec<Vec<i64>> = d.roots.iter().filter(|r| !r.is_zero()).map(|r| r.coords.clone()).collect();
        exps.sort();
        roots.sort();
        assert_eq!(exps, roots, "{}", d.id);
    }
}

#[test]
fn bc_degenerates_to_c_and_b() {
    for n in 1..=4 {
        let bc = SystemId::new(Series::BC, n);
        let c0 = Couplings::generic(&bc).with(1, ScalarExpr::zero());
        let h = build_hamiltonian(&bc, &c0, None).unwrap();
        let cid = SystemId::new(Series::C, n);
        let mut cc = Couplings::empty().with(1, ScalarExpr::g(2).mul(&ScalarExpr::from_ratio(1, 2)));
        for i in 2..=n {
            cc = cc.with(i, ScalarExpr::g(i + 1));
        }
        let hc = build_hamiltonian_on(&cid, &cc, None, &h.vars).unwrap();
        assert!(same(&h.potential, &hc.potential), "C, n={n}");

        let c0 = Couplings::generic(&bc).with(2, ScalarExpr::zero());
        let h = build_hamiltonian(&bc, &c0, None).unwrap();
        let bid = SystemId::new(Series::B, n);
        let mut cb = Couplings::empty().with(1, ScalarExpr::g(1));
        for i in 2..=n {
            cb = cb.with(i, ScalarExpr::g(i + 1));
        }
        let hb = build_hamiltonian_on(&bid, &cb, None, &h.vars).unwrap();
        assert!(same(&h.potential, &hb.potential), "B, n={n}");
    }
}

#[test]
fn truncations() {
    for (s, n) in [(Series::Binf, 3), (Series::BCinf, 2), (Series::Cinf, 2), (Series::Dinf, 3)] {
        let inf = SystemId::new(s, n);
        let fin = truncate_infinite(&inf, n).unwrap();
        assert_eq!(fin.series, s.truncated().unwrap());
        let a = build_hamiltonian(&inf, &Couplings::generic(&inf), None).unwrap();
        let b = build_hamiltonian_on(&fin, &Couplings::generic(&fin), None, &a.vars).unwrap();
        assert!(same(&a.potential, &b.potential), "{inf}");
    }
    let inf = SystemId::new(Series::Iinf, 2);
    let fin = truncate_infinite(&inf, 2).unwrap();
    assert_eq!(fin, SystemId::new(Series::I, 2));
    let a = build_hamiltonian(&inf, &Couplings::generic(&inf), None).unwrap();
    let cf = Couplings::generic(&fin).with_deformation(ScalarExpr::a());
    let b = build_hamiltonian_on(&fin, &cf, None, &a.vars).unwrap();
    assert!(same(&a.potential, &b.potential));
    assert!(matches!(truncate_infinite(&SystemId::new(Series::B, 2), 2), Err(TodaError::NotInfinite(_))));
}

#[test]
fn hat_i_carries_a_squared_shift() {
    let h = generic(Series::HatI, 3);
    let a = ScalarExpr::a();
    assert_eq!(h.shift, a.mul(&a).mul(&ScalarExpr::from_ratio(1, 2)));
    assert!(generic(Series::HatBC, 2).shift.is_zero());
}

#[test]
fn printed_variants_differ() {
    for (s, n) in [(Series::HatBC, 2), (Series::HatI, 3), (Series::D2aff, 2), (Series::D1aff, 2), (Series::I, 2)] {
        let id = SystemId::new(s, n);
        let a = build_hamiltonian(&id, &Couplings::generic(&id), None).unwrap();
        let b = build_hamiltonian(&id.printed(), &Couplings::generic(&id), None).unwrap();
        assert!(!same(&a.potential, &b.potential), "{id}");
    }
}

#[test]
fn errors() {
    assert!(matches!(SystemId::parse("Q_2"), Err(TodaError::UnknownSystem(_))));
    assert!(matches!(SystemId::parse("Dinf[1]"), Err(TodaError::RankOutOfRange { .. })));
    assert_eq!(SystemId::parse("hatbc_2").unwrap(), SystemId::new(Series::HatBC, 2));
    assert_eq!(SystemId::parse("Binf[3]").unwrap().to_string(), "Binf[3]");
    let id = SystemId::new(Series::BC, 2);
    let short = Couplings::empty().with(1, ScalarExpr::g(1));
    assert!(matches!(build_hamiltonian(&id, &short, None), Err(TodaError::CouplingMismatch { .. })));
}

#[test]
fn descriptor_json() {
    let d = describe(&SystemId::new(Series::BC, 2)).unwrap();
    let v: serde_json::Value = serde_json::to_value(&d).unwrap();
    assert_eq!(v["id"], "BC_2");
    assert_eq!(v["couplings"], serde_json::json!([1, 2, 3]));
    assert_eq!(v["roots"][1]["nonreduced"], true);
}
