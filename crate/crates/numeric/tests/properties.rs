use std::collections::BTreeMap;

use kernels::{CompositeKernel, PairId, PairKind};
use num_complex::Complex64;
use numeric::*;
use proptest::prelude::*;
use symexpr::{Params, ScalarExpr};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn params(pairs: &[(&str, f64)], spectral: &[f64]) -> Params {
    let m: BTreeMap<String, f64> = pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    params_from(&m, spectral).unwrap()
}

fn bc2() -> (CompositeKernel, Params) {
    (plan_for("BC", 2).unwrap(), params(&[("g1", 1.0), ("g2", 1.0), ("g3", 1.0)], &[0.0, 0.0]))
}

#[test]
fn contour_shift_is_invisible() {
    let plan = plan_for("BC", 1).unwrap();
    let p = params(&[("g1", 1.0), ("g2", 1.0)], &[0.5]);
    let b = Budget::default();
    for z in [-0.7, 0.0, 0.4] {
        let base = integrate(&plan, &[c(z)], &p, &Contour::default(), &b).unwrap();
        for d in [-0.1, 0.1] {
            let ct = Contour { branch_offset: 0.35 + d, ..Contour::default() };
            let r = integrate(&plan, &[c(z)], &p, &ct, &b).unwrap();
            let bound = 3.0 * base.err_estimate.max(r.err_estimate).max(1e-13 * base.value.norm());
            assert!((r.value - base.value).norm() < bound, "z {z} delta {d}: {} vs {}", r.value, base.value);
        }
    }
}

#[test]
fn qmc_is_identical_across_thread_counts() {
    let (plan, p) = bc2();
    let b = Budget { qmc_samples: 1 << 13, ..Budget::default() };
    let x = [c(0.1), c(-0.2)];
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| integrate(&plan, &x, &p, &Contour::default(), &b).unwrap())
    };
    let one = run(1);
    assert_eq!(one.method, Method::Qmc);
    for t in [2, 8] {
        let r = run(t);
        assert_eq!(r.value.re.to_bits(), one.value.re.to_bits());
        assert_eq!(r.value.im.to_bits(), one.value.im.to_bits());
        assert_eq!(r.err_estimate.to_bits(), one.err_estimate.to_bits());
    }
}

#[test]
fn seed_changes_qmc_value() {
    let (plan, p) = bc2();
    let x = [c(0.0), c(0.0)];
    let a = integrate(&plan, &x, &p, &Contour::default(), &Budget { qmc_samples: 1 << 12, ..Budget::default() }).unwrap();
    let b = integrate(&plan, &x, &p, &Contour::default(), &Budget { qmc_samples: 1 << 12, seed: 7, ..Budget::default() }).unwrap();
    assert_ne!(a.value, b.value);
    assert_eq!(b.seed, 7);
}

#[test]
fn doubling_qmc_budget_tightens_the_estimate() {
    let (plan, p) = bc2();
    let x = [c(0.0), c(0.0)];
    let mut prev: Option<QuadResult> = None;
    for k in [14, 15, 16] {
        let r = integrate(&plan, &x, &p, &Contour::default(), &Budget { qmc_samples: 1 << k, ..Budget::default() }).unwrap();
        if let Some(q) = prev {
            assert!(r.err_estimate < q.err_estimate, "2^{k}: {} !< {}", r.err_estimate, q.err_estimate);
            assert!((r.value - q.value).norm() <= q.err_estimate, "2^{k}: change {}", (r.value - q.value).norm());
        }
        prev = Some(r);
    }
}

#[test]
fn deeper_de_rule_is_consistent() {
    let plan = plan_for("B", 2).unwrap();
    let p = params(&[("g1", 1.0), ("g2", 1.0)], &[]);
    let x = [c(0.2), c(-0.1)];
    let coarse = integrate(&plan, &x, &p, &Contour::default(), &Budget { max_depth: 4, ..Budget::default() }).unwrap();
    let fine = integrate(&plan, &x, &p, &Contour::default(), &Budget { max_depth: 5, ..Budget::default() }).unwrap();
    assert!(fine.err_estimate <= coarse.err_estimate);
    assert!((fine.value - coarse.value).norm() <= coarse.err_estimate.max(1e-14 * fine.value.norm()));
}

#[test]
fn dimension_cap() {
    let pairs: Vec<PairId> = (2..=6).rev().map(|n| PairId::new(PairKind::GlStep, n)).collect();
    let plan = CompositeKernel::chain("deep", &pairs, false, ScalarExpr::zero()).unwrap();
    assert!(plan.dim() > 8);
    let r = Integrator::new(&plan, &Params::new(), &Contour::default(), &Budget::default());
    assert!(matches!(r, Err(NumericError::Dimension(_))));
}

#[test]
fn growing_contour_is_rejected() {
    let plan = plan_for("C", 1).unwrap();
    let mut ct = Contour::default();
    for v in plan.integrated() {
        ct.offsets.insert(v.name(), std::f64::consts::PI);
    }
    let r = integrate(&plan, &[c(0.0)], &params(&[("g1", 1.0)], &[]), &ct, &Budget::default());
    assert!(matches!(r, Err(NumericError::Contour(_))), "{r:?}");
}

#[test]
fn invalid_budget_and_contour() {
    let plan = plan_for("C", 1).unwrap();
    let p = params(&[("g1", 1.0)], &[]);
    let bad = Budget { rel_tol: 0.0, ..Budget::default() };
    assert!(matches!(integrate(&plan, &[c(0.0)], &p, &Contour::default(), &bad), Err(NumericError::Config(_))));
    let bad = Contour { window: -1.0, ..Contour::default() };
    assert!(matches!(integrate(&plan, &[c(0.0)], &p, &bad, &Budget::default()), Err(NumericError::Config(_))));
    assert!(matches!(integrate(&plan, &[c(0.0), c(1.0)], &p, &Contour::default(), &Budget::default()), Err(NumericError::Shape(_))));
}

#[test]
fn bc2_ground_state() {
    let (plan, p) = bc2();
    let grid = Grid::new(vec![Axis::around(0.0, 0.05, 2); 2]);
    let psi = tabulate_plan(&plan, &p, &Contour::default(), &Budget::default(), &grid, true).unwrap();
    assert_eq!(psi.re.iter().filter(|v| v.is_nan()).count(), 16);
    let r = eigen_residual(source_operator(&plan), &p, &psi, eigenvalue_of(&plan, &p).unwrap()).unwrap();
    assert_eq!(r.interior_points, 1);
    assert!(r.residual <= 1e-3, "{:e}", r.residual);
}

#[test]
fn stencil_mask() {
    let g = Grid::new(vec![Axis::around(0.0, 1.0, 3); 2]);
    let kept = (0..g.size()).filter(|&f| on_some_stencil(&g, &g.index(f))).count();
    // 7x7 minus the four 2x2 corners
    assert_eq!(kept, 49 - 16);
    let line = Grid::new(vec![Axis::new(0.0, 1.0, 0.25)]);
    assert!((0..line.size()).all(|f| on_some_stencil(&line, &line.index(f))));
}

#[test]
fn degenerations() {
    for n in 1..=3 {
        let r = degeneration_check(Limit::G1To0, n, 0, &[], 1).unwrap();
        assert!(r.passed && r.exact.len() == 2, "{r:?}");
    }
    for n in 1..=2 {
        let r = degeneration_check(Limit::G2To0, n, 10, &DEFAULT_EPSILONS, 3).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.rate.unwrap() >= 0.5);
        assert!(r.extrapolated_gap.unwrap() < 1e-6);
    }
    for n in 2..=3 {
        let r = degeneration_check(Limit::AffineToOpen, n, 10, &DEFAULT_EPSILONS, 5).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.pointwise_gap.unwrap() < 1e-8);
        assert_eq!(r.exact.len(), 1);
    }
    assert!(degeneration_check(Limit::AffineToOpen, 1, 10, &DEFAULT_EPSILONS, 5).is_err());
    assert_eq!(Limit::parse("g2to0"), Some(Limit::G2To0));
    assert_eq!(Limit::parse("sideways"), None);
}

#[test]
fn wavefunction_file_round_trip() {
    let spec = WavefunctionSpec {
        system: "BC".into(),
        n: 1,
        couplings: [("g1".to_string(), 1.0), ("g2".to_string(), 1.0)].into(),
        spectral: vec![0.5],
        contour: Contour::default(),
        budget: Budget::default(),
        grid: Grid::new(vec![Axis::parse("-1:1:0.05").unwrap()]),
    };
    let f = build_wavefunction(&spec).unwrap();
    assert_eq!(f.values.re.len(), 41);
    assert_eq!(f.eigenvalue, [0.125, 0.0]);
    let text = serde_json::to_string(&f).unwrap();
    let back: WavefunctionFile = serde_json::from_str(&text).unwrap();
    assert_eq!(back, f);
    assert!(residual_of(&back).unwrap().residual < 1e-4);
}

#[test]
fn unknown_names() {
    assert!(matches!(plan_for("Q", 1), Err(NumericError::Config(_))));
    assert!(named_plan("seed-x").is_err());
    assert!(params_from(&[("zz".to_string(), 1.0)].into(), &[]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn axis_parse_round_trip(lo in -5.0f64..5.0, span in 0.0f64..5.0, step in 0.01f64..1.0) {
        let a = Axis::parse(&format!("{lo}:{}:{step}", lo + span)).unwrap();
        prop_assert_eq!(a, Axis::new(lo, lo + span, step));
        prop_assert!(a.at(a.len() - 1) <= lo + span + 1e-9);
    }

    #[test]
    fn grid_index_round_trip(n1 in 1usize..6, n2 in 1usize..6, n3 in 1usize..6) {
        let g = Grid::new(vec![Axis::new(0.0, (n1 - 1) as f64, 1.0), Axis::new(0.0, (n2 - 1) as f64, 1.0), Axis::new(0.0, (n3 - 1) as f64, 1.0)]);
        prop_assert_eq!(g.size(), n1 * n2 * n3);
        for f in 0..g.size() {
            prop_assert_eq!(g.flat(&g.index(f)), f);
        }
    }

    #[test]
    fn k0_is_decreasing_and_convex(u in 0.01f64..40.0) {
        let (a, b, c) = (bessel_k0(u).unwrap(), bessel_k0(u * 1.01).unwrap(), bessel_k0(u * 1.02).unwrap());
        prop_assert!(a > b && b > c && a - b > b - c);
    }
}

#[test]
fn bad_axis() {
    for s in ["1:0:0.1", "0:1:0", "0:1", "a:b:c"] {
        assert!(Axis::parse(s).is_err(), "{s}");
    }
}
