use std::collections::BTreeMap;

use num_complex::Complex64;
use numeric::bessel::{k0_asymptotic, k0_integral, self_test};
use numeric::*;
use symexpr::{NumKernel, Params};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn params(pairs: &[(&str, f64)], spectral: &[f64]) -> Params {
    let m: BTreeMap<String, f64> = pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    params_from(&m, spectral).unwrap()
}

// mpmath besselk(0, u) at 30 digits
const K0: [(f64, f64); 7] = [
    (0.1, 2.4270690247020166),
    (0.5, 0.92441907122766586),
    (1.0, 0.42102443824070833),
    (2.0, 0.11389387274953344),
    (5.0, 3.6910983340425943e-3),
    (10.0, 1.7780062316167652e-5),
    (20.0, 5.7412378153365243e-10),
];

#[test]
fn k0_matches_reference_values() {
    for (u, want) in K0 {
        let got = bessel_k0(u).unwrap();
        assert!((got / want - 1.0).abs() < 1e-12, "K0({u}) = {got}, want {want}");
    }
}

#[test]
fn k0_small_argument_law() {
    const EULER: f64 = 0.577_215_664_901_532_9;
    for u in [1e-3, 1e-5, 1e-8] {
        let r = bessel_k0(u).unwrap() + (u / 2.0).ln() + EULER;
        assert!(r.abs() < u, "u = {u}: {r}");
    }
}

#[test]
fn k0_cross_checks() {
    assert!(self_test() < 1e-12);
    for u in [2.5, 10.0, 30.0] {
        let (a, last) = k0_asymptotic(u);
        let s = bessel_k0(u).unwrap();
        // the asymptotic series is only good to its smallest term
        assert!((a / s - 1.0).abs() <= 2.0 * last + 1e-15, "u = {u}");
        assert!((k0_integral(u) / s - 1.0).abs() < 1e-12);
    }
    let big = bessel_k0(10.0).unwrap();
    let lead = (std::f64::consts::PI / 20.0).sqrt() * (-10.0f64).exp();
    assert!((big / lead - 1.0).abs() < 0.02);
}

#[test]
fn k0_rejects_nonpositive() {
    assert!(matches!(bessel_k0(0.0), Err(NumericError::Domain(_))));
    assert!(matches!(bessel_k0(-1.0), Err(NumericError::Domain(_))));
    assert!(bessel_k0(f64::NAN).is_err());
}

#[test]
fn b1_and_c1_match_bessel() {
    let b1 = plan_for("B", 1).unwrap();
    let c1 = plan_for("C", 1).unwrap();
    let (ct, bu) = (Contour::default(), Budget::default());
    let mut worst: f64 = 0.0;
    for g in [0.5, 1.0, 2.0] {
        let p = params(&[("g1", g)], &[]);
        for k in 0..=20 {
            let x = -2.0 + 0.2 * k as f64;
            let vb = integrate(&b1, &[c(x)], &p, &ct, &bu).unwrap().value;
            let wb = 2.0 * bessel_k0(2.0 * (2.0 * g).sqrt() * (x / 2.0).exp()).unwrap();
            let vc = integrate(&c1, &[c(x)], &p, &ct, &bu).unwrap().value;
            let wc = 2.0 * bessel_k0(2.0 * g.sqrt() * x.exp()).unwrap();
            worst = worst.max((vb - wb).norm() / wb).max((vc - wc).norm() / wc);
        }
    }
    assert!(worst < 1e-8, "worst relative error {worst:e}");
}

#[test]
fn bessel_examples() {
    let want = 2.0 * bessel_k0(2.0).unwrap();
    assert!((want - 0.2277877).abs() < 1e-7);
    let b = integrate(&plan_for("B", 1).unwrap(), &[c(0.0)], &params(&[("g1", 0.5)], &[]), &Contour::default(), &Budget::default()).unwrap();
    let cc = integrate(&plan_for("C", 1).unwrap(), &[c(0.0)], &params(&[("g1", 1.0)], &[]), &Contour::default(), &Budget::default()).unwrap();
    assert!((b.value - want).norm() < 1e-10 && (cc.value - want).norm() < 1e-10);
    assert_eq!(b.method, Method::AdaptiveNested);
    assert!(b.converged);
}

#[test]
fn zero_dimensional_plan_is_the_kernel() {
    let plan = named_plan("seed-i1tobc0").unwrap();
    assert_eq!(plan.dim(), 0);
    let p = params(&[("g1", 0.7), ("g2", 1.3)], &[0.4]);
    let ext = plan.external();
    let x: Vec<Complex64> = (0..ext.len()).map(|i| c(0.3 - 0.2 * i as f64)).collect();
    let r = integrate(&plan, &x, &p, &Contour::default(), &Budget::default()).unwrap();
    let want = NumKernel::compile(&plan.integrand(), &p, &ext).unwrap().log_eval(&x).exp();
    assert_eq!(r.method, Method::Direct);
    assert!((r.value - want).norm() <= 1e-14 * want.norm());
}

fn free1() -> toda::SchrodingerOp {
    toda::build_hamiltonian(&toda::SystemId::new(toda::Series::Free, 1), &toda::Couplings::empty(), None).unwrap()
}

fn residual(system: &str, n: u32, couplings: &[(&str, f64)], spectral: &[f64], contour: Contour, axis: Axis) -> f64 {
    let spec = WavefunctionSpec {
        system: system.into(),
        n,
        couplings: couplings.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        spectral: spectral.to_vec(),
        contour,
        budget: Budget::default(),
        grid: Grid::new(vec![axis; n as usize]),
    };
    residual_of(&build_wavefunction(&spec).unwrap()).unwrap().residual
}

#[test]
fn c1_and_b1_are_annihilated() {
    let ax = Axis::new(-1.0, 1.0, 0.01);
    let rc = residual("C", 1, &[("g1", 1.0)], &[], Contour::default(), ax);
    let rb = residual("B", 1, &[("g1", 1.0)], &[], Contour::default(), ax);
    assert!(rc <= 1e-6, "C1 {rc:e}");
    assert!(rb <= 1e-6, "B1 {rb:e}");
}

#[test]
fn bc1_eigenvalue_both_offsets() {
    let ax = Axis::new(-1.0, 1.0, 0.05);
    for lambda in [0.0, 0.5, 1.0] {
        for contour in [Contour::default(), Contour::default().mirrored()] {
            let r = residual("BC", 1, &[("g1", 1.0), ("g2", 1.0)], &[lambda], contour.clone(), ax);
            assert!(r <= 1e-4, "lambda {lambda}, offset {}: {r:e}", contour.branch_offset);
        }
    }
}

#[test]
fn free_constant_has_zero_residual() {
    let h = free1();
    let grid = Grid::new(vec![Axis::new(-1.0, 1.0, 0.1)]);
    let n = grid.size();
    let psi = GridValues { grid, re: vec![1.0; n], im: vec![0.0; n], err_estimates: vec![0.0; n], method: Method::Direct };
    let r = eigen_residual(&h, &Params::new(), &psi, c(0.0)).unwrap();
    assert!(r.residual < 1e-12);
    assert_eq!(r.interior_points, n - 4);
}

#[test]
fn residual_needs_five_points() {
    let h = free1();
    let grid = Grid::new(vec![Axis::new(0.0, 0.3, 0.1)]);
    let psi = GridValues { grid, re: vec![1.0; 4], im: vec![0.0; 4], err_estimates: vec![0.0; 4], method: Method::Direct };
    assert!(matches!(eigen_residual(&h, &Params::new(), &psi, c(0.0)), Err(NumericError::Grid(_))));
}

#[test]
fn residual_rejects_vanishing_psi() {
    let h = free1();
    let grid = Grid::new(vec![Axis::new(-1.0, 1.0, 0.1)]);
    let n = grid.size();
    let mut re = vec![1.0; n];
    re[10] = 0.0;
    let psi = GridValues { grid, re, im: vec![0.0; n], err_estimates: vec![0.0; n], method: Method::Direct };
    assert!(eigen_residual(&h, &Params::new(), &psi, c(0.0)).is_err());
}
