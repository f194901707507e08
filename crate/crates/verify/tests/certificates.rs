use kernels::*;
use symexpr::*;
use toda::{build_hamiltonian_on, Couplings, Series, SystemId};
use verify::*;

fn free(v: Variable) -> toda::SchrodingerOp {
    let id = SystemId::new(Series::Free, 1);
    build_hamiltonian_on(&id, &Couplings::empty(), None, &[v]).unwrap()
}

#[test]
fn identity_kernel_between_free_motions() {
    let r = intertwine_residual(&free(Variable::x(1, 1)), &free(Variable::y(1, 1)), &KernelExpr::one()).unwrap();
    assert!(r.is_zero().unwrap());
}

#[test]
fn shared_variables_are_rejected() {
    let v = Variable::x(1, 1);
    assert!(matches!(intertwine_residual(&free(v), &free(v), &KernelExpr::one()), Err(VerifyError::SharedVariables(_))));
    let k = KernelExpr::one().exp_term(ScalarExpr::one(), LinearForm::var(Variable::u(3, 1)));
    assert!(matches!(
        intertwine_residual(&free(v), &free(Variable::y(1, 1)), &k),
        Err(VerifyError::StrayVariables(_))
    ));
}

#[test]
fn gl_step_certifies() {
    assert!(certify(&PairId::new(PairKind::GlStep, 1)).unwrap().is_zero());
}

#[test]
fn doubled_b_coupling_leaves_a_single_witness() {
    // B_1 -> BC*_1 with g_1 doubled in H^{B_1}: the residual is g_1 e^{x_1} exactly.
    let e = build(&PairId::new(PairKind::BToBCstar, 1)).unwrap();
    let mut src = e.src.clone();
    src.potential = src.potential.substitute(&bindings([(Sym::G(1), ScalarExpr::from_int(2).mul(&ScalarExpr::g(1)))])).unwrap();
    let r = intertwine_residual(&src, &e.dst, &e.kernel).unwrap();
    let want = RatExp::from_exppoly(ExpPoly::monomial(ScalarExpr::g(1), LinearForm::var(Variable::x(1, 1))));
    assert!(r.sub(&want).is_zero().unwrap());
    let c = certify_parts(&e.pair, "doubled", &src, &e.dst, &e.kernel).unwrap();
    assert_eq!(c.status, Status::Nonzero);
    let w = c.witness.unwrap();
    assert_eq!((w.coeff, w.arg), (ScalarExpr::g(1), LinearForm::var(Variable::x(1, 1))));
}

#[test]
fn named_families_certify() {
    for n in 1..=4 {
        assert!(certify(&PairId::new(PairKind::BCToIstar, n)).unwrap().is_zero(), "bc-to-istar {n}");
        assert!(certify(&PairId::new(PairKind::GlAff, n)).unwrap().is_zero(), "gl-aff {n}");
    }
    for n in 1..=3 {
        let c = certify(&PairId::new(PairKind::INextToBC, n)).unwrap();
        assert!(c.is_zero(), "i-next-to-bc {n}");
    }
}

#[test]
fn shift_is_essential_for_i_next() {
    let e = build(&PairId::new(PairKind::INextToBC, 2)).unwrap();
    let mut src = e.src.clone();
    src.shift = ScalarExpr::zero();
    let c = certify_parts(&e.pair, "no shift", &src, &e.dst, &e.kernel).unwrap();
    assert_eq!(c.status, Status::Nonzero);
}

#[test]
fn arbiter_picks_unique_readings() {
    let a = typo_arbiter(&PairId::new(PairKind::BCToIstar, 3)).unwrap();
    assert_eq!(a.chosen_label(), Some("sum-inside"));
    let a = typo_arbiter(&PairId::new(PairKind::HatIToHatBC, 2)).unwrap();
    assert_eq!(a.chosen_label(), Some("default"));
    assert_eq!(a.statuses.iter().filter(|(_, s)| *s == Status::CertifiedZero).count(), 1);
    let a = typo_arbiter(&PairId::new(PairKind::Dinf, 2)).unwrap();
    assert_eq!(a.chosen_label(), Some("hamiltonian-labels"));
    let a = typo_arbiter(&PairId::new(PairKind::CToD, 2)).unwrap();
    assert_eq!(a.statuses.len(), 1);
    assert_eq!(a.chosen, Some(0));
}

#[test]
fn arbiter_is_inconclusive_when_readings_coincide() {
    // for n <= 2 the two summation scopes give the same kernel
    let a = typo_arbiter(&PairId::new(PairKind::BCToIstar, 2)).unwrap();
    assert_eq!(a.chosen, None);
    assert!(a.statuses.iter().all(|(_, s)| *s == Status::CertifiedZero));
}

#[test]
fn bc_recursion_shift_is_sum_of_half_squares() {
    let c = composite_certificate(&recursion_plan(Series::BC, 2).unwrap()).unwrap();
    let half = ScalarExpr::from_ratio(1, 2);
    let (l1, l2) = (ScalarExpr::lambda(1), ScalarExpr::lambda(2));
    assert_eq!(c.shift, l1.mul(&l1).add(&l2.mul(&l2)).mul(&half));
    assert_eq!(c.links.len(), 4);
}

#[test]
fn q_operator_plans_commute() {
    let c = composite_certificate(&qop_plan(Series::A2even, 2).unwrap()).unwrap();
    assert!(c.shift.is_zero());
    assert_eq!(c.source, c.target);
}

#[test]
fn single_node_plan() {
    let c = composite_certificate(&Seed::C1.plan().unwrap()).unwrap();
    assert_eq!(c.links.len(), 1);
    assert_eq!(c.links[0], certify(&PairId::new(PairKind::CToD, 1)).unwrap());
}

#[test]
fn broken_chain_names_the_link() {
    let pairs = [PairId::new(PairKind::CToD, 2), PairId::new(PairKind::CToD, 1)];
    let e = CompositeKernel::chain("bad", &pairs, false, ScalarExpr::zero()).unwrap_err();
    assert!(matches!(e, KernelError::BrokenChain { link: 1, .. }), "{e}");
}

#[test]
fn certificates_are_deterministic() {
    for p in [PairId::new(PairKind::HatIToHatBC, 2), PairId::new(PairKind::IToBC, 3)] {
        assert_eq!(certify(&p).unwrap(), certify(&p).unwrap());
    }
}

#[test]
fn plane_wave_conjugation_shifts_residual_predictably() {
    // K' = K e^{c sum z}: the residual changes by -sum_z (c L_z + c^2/2).
    let e = build(&PairId::new(PairKind::IToBC, 2)).unwrap();
    let c = ScalarExpr::lambda(9);
    let mut sum = LinearForm::zero();
    for v in &e.src.vars {
        sum = sum.add(&LinearForm::var(*v));
    }
    let k2 = e.kernel.clone().plane(&c, &sum);
    let r2 = intertwine_residual(&e.src, &e.dst, &k2).unwrap();
    let map = elimination_for(&e.kernel, &[&e.src, &e.dst]);
    let k = e.kernel.substitute(&map).unwrap();
    let mut delta = RatExp::zero();
    for v in &e.src.vars {
        delta = delta.sub(&k.dlog(*v).unwrap().scale(&c));
        delta = delta.sub(&RatExp::constant(c.mul(&c).mul(&ScalarExpr::from_ratio(1, 2))));
    }
    assert!(r2.sub(&delta).is_zero().unwrap());

    // compensating shift on the source restores a zero certificate once the
    // first-order part is absent (pure translation of a free pair)
    let kx = KernelExpr::one().plane(&c, &LinearForm::var(Variable::x(1, 1)));
    let mut src = free(Variable::x(1, 1));
    src.shift = c.mul(&c).mul(&ScalarExpr::from_ratio(1, 2));
    assert!(intertwine_residual(&src, &free(Variable::y(1, 1)), &kx).unwrap().is_zero().unwrap());
}

#[test]
fn negative_controls_all_fire() {
    for p in catalog_pairs(1..=2) {
        let neg = negative_controls(&p).unwrap();
        for (s, c) in neg {
            assert_eq!(c.status, Status::Nonzero, "{p} with {s:?} doubled");
            assert!(c.witness.is_some());
        }
    }
}
