//! Numeric cross-checks of certified identities, independent of the symbolic
//! derivative code: `(H K)/K` is rebuilt from finite differences of `log K`.

use kernels::{build, catalog_pairs, Elementary};
use num_complex::Complex64;
use proptest::prelude::*;
use symexpr::{Params, Point, Sym};
use verify::{certify_elementary, elimination_for};

fn params_for(e: &Elementary, seed: &[f64]) -> Params {
    let mut syms = e.kernel.syms();
    syms.extend(e.src.potential.syms());
    syms.extend(e.dst.potential.syms());
    syms.extend(e.src.shift.syms());
    syms.extend(e.dst.shift.syms());
    let mut p = Params::new();
    for (i, s) in syms.into_iter().enumerate() {
        let r = seed[i % seed.len()];
        p = match s {
            Sym::G(_) | Sym::Sigma(_) => p.with(s, 0.4 + r),
            _ => p.with(s, r - 0.5),
        };
    }
    p
}

/// `sum_v -1/2 (d_v^2 log K + (d_v log K)^2)` by fourth-order central differences.
fn kinetic_fd(e: &Elementary, params: &Params, at: &Point, vars: &[symexpr::Variable]) -> (Complex64, f64) {
    let h = 1e-3;
    let logk = |p: &Point| e.kernel.eval_log(params, p).unwrap();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut scale: f64 = 0.0;
    for v in vars {
        let f = |d: f64| {
            let mut p = at.clone();
            *p.get_mut(v).unwrap() += d;
            logk(&p)
        };
        let (m2, m1, c, p1, p2) = (f(-2.0 * h), f(-h), f(0.0), f(h), f(2.0 * h));
        let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
        let d2 = (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
        acc -= 0.5 * (d2 + d1 * d1);
        scale = scale.max(d2.norm()).max((d1 * d1).norm());
    }
    (acc, scale)
}

fn fd_residual(e: &Elementary, params: &Params, coords: &[f64]) -> (f64, f64) {
    let mut at = Point::new();
    let vars: Vec<_> = e.src.vars.iter().chain(&e.dst.vars).copied().collect();
    for (i, v) in vars.iter().enumerate() {
        let r = coords[i % coords.len()];
        at.insert(*v, Complex64::new(r, 0.1 * r));
    }
    let (ks, ss) = kinetic_fd(e, params, &at, &e.src.vars);
    let (kd, sd) = kinetic_fd(e, params, &at, &e.dst.vars);
    let vs = e.src.potential.eval(params, &at).unwrap() + e.src.shift.eval(params).unwrap();
    let vd = e.dst.potential.eval(params, &at).unwrap() + e.dst.shift.eval(params).unwrap();
    let scale = ss.max(sd).max(e.src.potential.eval_scale(params, &at).unwrap()).max(e.dst.potential.eval_scale(params, &at).unwrap());
    ((ks + vs - kd - vd).norm(), scale.max(1.0))
}

fn eliminated(e: &Elementary) -> Elementary {
    let map = elimination_for(&e.kernel, &[&e.src, &e.dst]);
    let mut e = e.clone();
    e.kernel = e.kernel.substitute(&map).unwrap();
    e.src = e.src.substitute(&map).unwrap();
    e.dst = e.dst.substitute(&map).unwrap();
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn certified_pairs_vanish_numerically(
        idx in 0usize..1000,
        seed in prop::collection::vec(0.0f64..1.0, 6),
        coords in prop::collection::vec(-1.0f64..1.0, 8),
    ) {
        let pairs = catalog_pairs(1..=3);
        let e = build(&pairs[idx % pairs.len()]).unwrap();
        prop_assume!(certify_elementary(&e).unwrap().is_zero());
        let e = eliminated(&e);
        let params = params_for(&e, &seed);
        let (r, scale) = fd_residual(&e, &params, &coords);
        prop_assert!(r < 1e-6 * scale, "{}: residual {r:e} at scale {scale:e}", e.pair);
    }

    #[test]
    fn inverse_pairs_certify_with_their_forward_pair(idx in 0usize..1000) {
        let pairs = catalog_pairs(1..=3);
        let p = pairs[idx % pairs.len()];
        let f = verify::certify(&p).unwrap();
        let b = verify::certify(&p.inverted()).unwrap();
        prop_assert_eq!(f.status, b.status);
    }
}

#[test]
fn finite_differences_detect_a_broken_identity() {
    let e = eliminated(&build(&kernels::PairId::new(kernels::PairKind::BToBCstar, 1)).unwrap());
    let mut bad = e.clone();
    bad.src.shift = symexpr::ScalarExpr::from_int(1);
    let params = params_for(&bad, &[0.3, 0.7]);
    let (r, scale) = fd_residual(&bad, &params, &[0.2, -0.4]);
    assert!(r > 0.5 && r < 1.0 + 1e-6 * scale);
}
