use num_complex::Complex64;
use symexpr::*;

fn z() -> Variable {
    Variable::z(1, 1)
}

#[test]
fn iota_squared() {
    assert_eq!(ScalarExpr::iota().mul(&ScalarExpr::iota()), ScalarExpr::from_int(-1));
}

#[test]
fn difference_of_equal_quotients_is_zero() {
    let q = ScalarExpr::g(1).div(&ScalarExpr::sigma(2)).unwrap();
    assert!(q.sub(&q).is_zero());
    assert_eq!(ScalarExpr::one().div(&ScalarExpr::zero()), Err(SymError::DivisionByZero));
}

#[test]
fn sigma_binding_follows_coupling() {
    let p = Params::new().with(Sym::G(2), 2.0);
    let v = ScalarExpr::sigma(2).eval(&p).unwrap();
    assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn identity_kernel_is_neutral() {
    let k = KernelExpr::one().exp_term(ScalarExpr::from_int(-1), LinearForm::from_terms(&[(Variable::x(1, 1), 1), (z(), -1)]));
    assert_eq!(k.mul(&KernelExpr::one()), k);
}

#[test]
fn exponent_additivity() {
    let x = Variable::x(1, 1);
    let a = KernelExpr::one().exp_term(ScalarExpr::from_int(-1), LinearForm::from_terms(&[(x, 1), (z(), -1)]));
    let b = KernelExpr::one().exp_term(ScalarExpr::g(1).neg(), LinearForm::from_terms(&[(z(), 1), (x, -1)]));
    let c = KernelExpr::one()
        .exp_term(ScalarExpr::from_int(-1), LinearForm::from_terms(&[(x, 1), (z(), -1)]))
        .exp_term(ScalarExpr::g(1).neg(), LinearForm::from_terms(&[(z(), 1), (x, -1)]));
    assert_eq!(a.mul(&b), c);
}

#[test]
fn split_product_matches_high_precision_value() {
    let a = ScalarExpr::a();
    let p = ScalarExpr::from_ratio(1, 2);
    let minus_two_i_a = ScalarExpr::from_int(-2).mul(&ScalarExpr::iota()).mul(&a);
    let k = KernelExpr::one()
        .binomial(ScalarExpr::from_int(-1), LinearForm::term(z(), 2), minus_two_i_a.clone())
        .mul(&KernelExpr::one().binomial(ScalarExpr::from_int(-1), LinearForm::var(z()), p.clone()));
    let expected = KernelExpr::one()
        .binomial(ScalarExpr::from_int(-1), LinearForm::var(z()), p.add(&minus_two_i_a))
        .binomial(ScalarExpr::one(), LinearForm::var(z()), minus_two_i_a);
    assert_eq!(k, expected);
    let params = Params::new().with(Sym::A, 0.2);
    let pt: Point = [(z(), Complex64::new(0.3, 0.1))].into_iter().collect();
    let v = k.eval(&params, &pt).unwrap();
    // 50-digit reference
    let reference = Complex64::new(0.049824885036654479378, -0.19923515715524575122);
    assert!((v - reference).norm() < 1e-12);
}

#[test]
fn chain_rule_examples() {
    let x = Variable::x(1, 1);
    let k = KernelExpr::one().exp_term(ScalarExpr::from_int(-1), LinearForm::from_terms(&[(x, 1), (z(), -1)]));
    let d = k.dlog(x).unwrap();
    let e = RatExp::from_exppoly(ExpPoly::monomial(ScalarExpr::from_int(-1), LinearForm::from_terms(&[(x, 1), (z(), -1)])));
    assert!(d.sub(&e).is_zero().unwrap());

    let p = ScalarExpr::lambda(1);
    let k = KernelExpr::one().binomial(ScalarExpr::from_int(-1), LinearForm::var(z()), p.clone());
    let d = k.dlog(z()).unwrap();
    let e = RatExp::fraction(ExpPoly::monomial(p.neg(), LinearForm::var(z())), &BinomBase::minus(LinearForm::var(z())), 1).unwrap();
    assert!(d.sub(&e).is_zero().unwrap());
}

#[test]
fn gl_step_kernel_log_derivative() {
    let (x11, x21, x22) = (Variable::x(1, 1), Variable::x(2, 1), Variable::x(2, 2));
    let k = KernelExpr::one()
        .exp_term(ScalarExpr::from_int(-1), LinearForm::from_terms(&[(x11, 1), (x21, -1)]))
        .exp_term(ScalarExpr::g(1).neg(), LinearForm::from_terms(&[(x22, 1), (x11, -1)]));
    let d = k.dlog(x11).unwrap();
    let e = ExpPoly::from_terms([
        (ScalarExpr::from_int(-1), LinearForm::from_terms(&[(x11, 1), (x21, -1)])),
        (ScalarExpr::g(1), LinearForm::from_terms(&[(x22, 1), (x11, -1)])),
    ]);
    assert!(d.sub(&RatExp::from_exppoly(e)).is_zero().unwrap());
}

#[test]
fn principal_branch_value() {
    let k = KernelExpr::one().binomial(
        ScalarExpr::from_int(-1),
        LinearForm::term(z(), 2),
        ScalarExpr::from_int(-2).mul(&ScalarExpr::iota()).mul(&ScalarExpr::a()),
    );
    let params = Params::new().with(Sym::A, 0.5);
    let pt: Point = [(z(), Complex64::new(-1.0, 0.0))].into_iter().collect();
    let v = k.eval(&params, &pt).unwrap();
    // 50-digit reference
    let reference = Complex64::new(0.98944607976530814769, 0.14490153635163247124);
    assert!((v - reference).norm() < 1e-13);
    let simple = KernelExpr::one().exp_term(ScalarExpr::from_int(-1), LinearForm::from_terms(&[(Variable::x(1, 1), 1), (z(), -1)]));
    let pt: Point = [(z(), Complex64::new(0.0, 0.0)), (Variable::x(1, 1), Complex64::new(0.0, 0.0))].into_iter().collect();
    assert!((simple.eval(&Params::new(), &pt).unwrap().re - 0.3678794412).abs() < 1e-10);
}

#[test]
fn substitution_examples() {
    let e = ScalarExpr::lambda(1).mul(&ScalarExpr::g(1));
    let same = e.substitute(&bindings([(Sym::Lambda(1), ScalarExpr::lambda(1))])).unwrap();
    assert_eq!(same, e);
    let bad = ScalarExpr::one().div(&ScalarExpr::g(1)).unwrap();
    assert!(bad.substitute(&bindings([(Sym::G(1), ScalarExpr::zero())])).is_err());
}

#[test]
fn unbound_symbol_is_an_error() {
    assert!(matches!(ScalarExpr::a().eval(&Params::new()), Err(SymError::UnboundSymbol(_))));
}

#[test]
fn canonical_json_is_stable() {
    let k = KernelExpr::one()
        .exp_term(ScalarExpr::g(1).neg(), LinearForm::from_terms(&[(z(), -1)]))
        .binomial(ScalarExpr::from_int(-1), LinearForm::var(z()), ScalarExpr::a());
    let s = serde_json::to_string(&k).unwrap();
    assert_eq!(
        s,
        r#"{"exp_arg":[{"coeff":"-g1","arg":"-z1_1"}],"plane_wave":{},"binomials":[{"scale":"-1","arg":"z1_1","exponent":"a"}],"prefactor":"1"}"#
    );
}
