//! The check suites behind `todactl run`.
//!
//! * `paper-verify`: symbolic certificates of every catalog pair for
//!   `n <= 4` (with reading arbitration), negative controls, composite
//!   plans, and a numeric spot check of certified residuals.
//! * `paper-eigen`: Bessel oracle, eigen-residuals of tabulated
//!   eigenfunctions, contour independence.
//! * `paper-degenerate`: coupling limits.

use std::collections::BTreeMap;
use std::time::Instant;

use kernels::{build, catalog_pairs, qop_plan, readings, recursion_plan, PairId, QOP_SERIES};
use num_complex::Complex64;
use numeric::{
    bessel_k0, build_wavefunction, degeneration_check, eigen_residual, eigenvalue_of, integrate, params_from, plan_for, residual_of, source_operator, tabulate_plan, Axis,
    Contour, Grid, Limit, WavefunctionSpec, DEFAULT_EPSILONS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use symexpr::{Params, Point, ScalarExpr, Sym};
use toda::Series;
use verify::{certify_parts, composite_certificate, intertwine_residual, negative_controls, typo_arbiter};

use crate::report::{Record, Report};
use crate::{CliError, RunConfig};

/// Certificates must finish within this many seconds each.
pub const CERTIFICATE_SECONDS: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    PaperVerify,
    PaperEigen,
    PaperDegenerate,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Suite, CliError> {
        match s {
            "paper-verify" => Ok(Suite::PaperVerify),
            "paper-eigen" => Ok(Suite::PaperEigen),
            "paper-degenerate" => Ok(Suite::PaperDegenerate),
            "all" => Ok(Suite::All),
            _ => Err(CliError::UnknownSuite(s.into())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::PaperVerify => "paper-verify",
            Suite::PaperEigen => "paper-eigen",
            Suite::PaperDegenerate => "paper-degenerate",
            Suite::All => "all",
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let mut records = Vec::new();
    if matches!(suite, Suite::PaperVerify | Suite::All) {
        records.extend(certificate_records(1..=4));
        records.extend(negative_control_records(1..=4));
        records.extend(composite_records(1..=4));
        records.push(crosscheck_record(100, 10, cfg.quadrature.seed));
    }
    if matches!(suite, Suite::PaperEigen | Suite::All) {
        records.extend(eigen_records(cfg)?);
    }
    if matches!(suite, Suite::PaperDegenerate | Suite::All) {
        records.extend(degeneration_records(cfg)?);
    }
    Ok(Report::new(suite.name(), cfg.quadrature.seed, records))
}

fn secs(t: Instant) -> f64 {
    t.elapsed().as_secs_f64()
}

fn error_record(tag: String, pair: String, n: u32, kind: &str, e: impl std::fmt::Display) -> Record {
    Record::new(tag, pair, n, kind).with_status(false).detail(format!("error: {e}"))
}

/// One certificate per catalog pair, plus an arbitration record for pairs
/// with more than one candidate reading. The catalog reading must certify.
pub fn certificate_records(ns: std::ops::RangeInclusive<u32>) -> Vec<Record> {
    catalog_pairs(ns)
        .par_iter()
        .flat_map_iter(|p| {
            let mut out = Vec::new();
            let t = Instant::now();
            let tag = format!("verify/certificate/{p}");
            match readings(p) {
                Err(e) => out.push(error_record(tag, p.to_string(), p.n, "certificate", e)),
                Ok(rs) if rs.len() == 1 => {
                    let r = &rs[0];
                    out.push(match certify_parts(p, r.label, &r.src, &r.dst, &r.kernel) {
                        Ok(c) => Record::new(tag, p.to_string(), p.n, "certificate")
                            .measured(c.numerator_terms as f64 * if c.is_zero() { 0.0 } else { 1.0 }, 0.0)
                            .with_status(c.is_zero() && secs(t) < CERTIFICATE_SECONDS)
                            .detail(format!("reading {}, {} denominator bases", c.reading, c.bases))
                            .timed(secs(t)),
                        Err(e) => error_record(tag, p.to_string(), p.n, "certificate", e),
                    });
                }
                Ok(_) => match typo_arbiter(p) {
                    Err(e) => out.push(error_record(tag, p.to_string(), p.n, "certificate", e)),
                    Ok(a) => {
                        let el = secs(t);
                        let cat = &a.certificates[0];
                        out.push(
                            Record::new(tag, p.to_string(), p.n, "certificate")
                                .measured(if cat.is_zero() { 0.0 } else { cat.numerator_terms as f64 }, 0.0)
                                .with_status(cat.is_zero() && el < CERTIFICATE_SECONDS)
                                .detail(format!("reading {}", cat.reading))
                                .timed(el),
                        );
                        let zeros: Vec<&str> = a.statuses.iter().filter(|(_, s)| *s == verify::Status::CertifiedZero).map(|(l, _)| l.as_str()).collect();
                        let detail = match a.chosen_label() {
                            Some(l) => format!("unique certifying reading: {l}"),
                            None => format!("readings certifying: {}", if zeros.is_empty() { "none".into() } else { zeros.join(", ") }),
                        };
                        out.push(
                            Record::new(format!("verify/arbiter/{p}"), p.to_string(), p.n, "arbiter")
                                .measured(zeros.len() as f64, a.statuses.len() as f64)
                                .with_status(zeros.first() == Some(&cat.reading.as_str()))
                                .detail(detail)
                                .timed(el),
                        );
                    }
                },
            }
            out
        })
        .collect()
}

/// Doubling any single source coupling must break the certificate.
pub fn negative_control_records(ns: std::ops::RangeInclusive<u32>) -> Vec<Record> {
    catalog_pairs(ns)
        .par_iter()
        .map(|p| {
            let t = Instant::now();
            let tag = format!("verify/negative-control/{p}");
            match negative_controls(p) {
                Err(e) => error_record(tag, p.to_string(), p.n, "negative-control", e),
                Ok(cs) => {
                    let survived: Vec<String> = cs.iter().filter(|(_, c)| c.is_zero() || c.witness.is_none()).map(|(s, _)| s.name()).collect();
                    Record::new(tag, p.to_string(), p.n, "negative-control")
                        .measured(survived.len() as f64, 0.0)
                        .with_status(survived.is_empty() && !cs.is_empty())
                        .detail(if survived.is_empty() {
                            format!("{} couplings perturbed, all nonzero", cs.len())
                        } else {
                            format!("still zero with {} doubled", survived.join(", "))
                        })
                        .timed(secs(t))
                }
            }
        })
        .collect()
}

fn half_sum_of_squares(n: u32) -> ScalarExpr {
    (1..=n).fold(ScalarExpr::zero(), |s, k| s.add(&ScalarExpr::lambda(k).mul(&ScalarExpr::lambda(k)))).mul(&ScalarExpr::from_ratio(1, 2))
}

/// Recursion plans for the open series and Q-operator plans for the
/// affine and semi-infinite ones; each link certified, chain glued, shift
/// summed.
pub fn composite_records(ns: std::ops::RangeInclusive<u32>) -> Vec<Record> {
    let mut plans = Vec::new();
    for n in ns {
        for s in [Series::B, Series::C, Series::D, Series::BC, Series::I] {
            if let Ok(p) = recursion_plan(s, n) {
                plans.push((n, p));
            }
        }
        for s in QOP_SERIES {
            if let Ok(p) = qop_plan(s, n) {
                plans.push((n, p));
            }
        }
    }
    plans
        .par_iter()
        .flat_map_iter(|(n, plan)| {
            let t = Instant::now();
            let tag = format!("verify/composite/{}", plan.label);
            let pairs = plan.pairs().iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" * ");
            let mut out = Vec::new();
            match composite_certificate(plan) {
                Err(e) => out.push(error_record(tag, pairs, *n, "composite", e)),
                Ok(c) => {
                    out.push(
                        Record::new(tag, pairs.clone(), *n, "composite")
                            .with_status(true)
                            .detail(format!("{} -> {}, shift {}", c.source, c.target, c.shift.latex()))
                            .timed(secs(t)),
                    );
                    if plan.source().series == Series::BC && !plan.last_external {
                        let ok = c.shift == half_sum_of_squares(*n);
                        out.push(
                            Record::new(format!("verify/eigenvalue/{}", plan.label), pairs, *n, "eigenvalue")
                                .with_status(ok)
                                .detail(format!("shift {}", c.shift.latex()))
                                .timed(secs(t)),
                        );
                    }
                }
            }
            out
        })
        .collect()
}

/// Evaluates `count` randomly drawn certified residuals (before clearing
/// denominators) at `points` random complex points each. The metric is the
/// worst `|r| / term scale`.
pub fn crosscheck_record(count: usize, points: usize, seed: u64) -> Record {
    let t = Instant::now();
    let tag = "verify/numeric-crosscheck/catalog".to_string();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = catalog_pairs(1..=3);
    let mut cache: BTreeMap<usize, Option<(symexpr::RatExp, Vec<symexpr::Variable>)>> = BTreeMap::new();
    let mut worst: f64 = 0.0;
    let mut done = 0;
    let mut attempts = 0;
    while done < count && attempts < 20 * count {
        attempts += 1;
        let i = rng.gen_range(0..pairs.len());
        let entry = cache.entry(i).or_insert_with(|| {
            let e = build(&pairs[i]).ok()?;
            let r = intertwine_residual(&e.src, &e.dst, &e.kernel).ok()?;
            r.zero_test().ok().filter(|z| z.is_zero)?;
            Some((r, e.src.vars.iter().chain(&e.dst.vars).copied().collect()))
        });
        let Some((r, vars)) = entry else { continue };
        let mut params = Params::new();
        for s in r.syms() {
            params = match s {
                Sym::G(_) | Sym::Sigma(_) => params.with(s, rng.gen_range(0.5..1.5)),
                _ => params.with(s, rng.gen_range(-1.0..1.0)),
            };
        }
        let mut k = 0;
        let mut tries = 0;
        while k < points && tries < 10 * points {
            tries += 1;
            let at: Point = vars.iter().map(|v| (*v, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-0.5..0.5)))).collect();
            let (Ok(val), Ok(scale)) = (r.eval(&params, &at), r.eval_scale(&params, &at)) else { continue };
            worst = worst.max(val.norm() / scale.max(f64::MIN_POSITIVE));
            k += 1;
        }
        done += 1;
    }
    Record::new(tag, format!("{} catalog pairs", pairs.len()), 0, "numeric-crosscheck")
        .measured(if done == count { worst } else { f64::INFINITY }, 1e-10)
        .detail(format!("{done} residuals x {points} points"))
        .timed(secs(t))
}

fn spec(system: &str, n: u32, couplings: BTreeMap<String, f64>, spectral: Vec<f64>, contour: Contour, cfg: &RunConfig, axis: Axis) -> WavefunctionSpec {
    WavefunctionSpec { system: system.into(), n, couplings, spectral, contour, budget: cfg.budget(), grid: Grid::new(vec![axis; n as usize]) }
}

/// Worst relative deviation of the one-variable B and C eigenfunctions from
/// `2 K_0` on `x in [-2, 2]` (21 points) for `g1 in {1/2, 1, 2}`.
pub fn bessel_oracle(system: &str) -> Result<f64, CliError> {
    let plan = plan_for(system, 1)?;
    let mut worst: f64 = 0.0;
    for g in [0.5, 1.0, 2.0] {
        let p = Params::new().with(Sym::G(1), g);
        for k in 0..=20 {
            let x = -2.0 + 0.2 * k as f64;
            let v = integrate(&plan, &[Complex64::new(x, 0.0)], &p, &Contour::default(), &numeric::Budget::default())?.value;
            let u = if system == "B" { 2.0 * (2.0 * g).sqrt() * (x / 2.0).exp() } else { 2.0 * g.sqrt() * x.exp() };
            let want = 2.0 * bessel_k0(u)?;
            worst = worst.max((v - want).norm() / want);
        }
    }
    Ok(worst)
}

pub fn eigen_records(cfg: &RunConfig) -> Result<Vec<Record>, CliError> {
    let mut out = Vec::new();
    for sys in ["B", "C"] {
        let t = Instant::now();
        let w = bessel_oracle(sys)?;
        out.push(Record::new(format!("eigen/bessel-oracle/{sys}1"), format!("{sys}1"), 1, "oracle").measured(w, 1e-8).detail("21 points x 3 couplings").timed(secs(t)));
    }
    let t = Instant::now();
    out.push(Record::new("eigen/bessel-self-test/K0", "K0", 0, "oracle").measured(numeric::bessel::self_test(), 1e-12).timed(secs(t)));

    let fine = Axis::new(-1.0, 1.0, 0.01);
    for sys in ["B", "C"] {
        let t = Instant::now();
        let f = build_wavefunction(&spec(sys, 1, cfg.couplings_for(1), vec![], cfg.contour(), cfg, fine))?;
        let r = residual_of(&f)?;
        out.push(
            Record::new(format!("eigen/residual/{sys}1"), format!("{sys}1"), 1, "eigen-residual")
                .measured(r.residual, 1e-6)
                .detail(format!("E = 0, grid -1:1:0.01, worst at {:?}", r.worst_point))
                .timed(secs(t)),
        );
    }
    let coarse = Axis::new(-1.0, 1.0, 0.05);
    for &lambda in &cfg.spectral {
        for contour in [cfg.contour(), cfg.contour().mirrored()] {
            let t = Instant::now();
            let f = build_wavefunction(&spec("BC", 1, cfg.couplings_for(2), vec![lambda], contour.clone(), cfg, coarse))?;
            let r = residual_of(&f)?;
            out.push(
                Record::new(format!("eigen/residual/BC1/lambda={lambda}/offset={:+}", contour.branch_offset), "BC1", 1, "eigen-residual")
                    .measured(r.residual, 1e-4)
                    .detail(format!("E = {}, grid -1:1:0.05", f.eigenvalue[0]))
                    .timed(secs(t)),
            );
        }
    }
    out.push(contour_record(cfg)?);

    let t = Instant::now();
    let plan = plan_for("BC", 2)?;
    let params = params_from(&cfg.couplings_for(3), &[0.0, 0.0])?;
    let grid = Grid::new(vec![Axis::around(0.0, 0.05, 2); 2]);
    let psi = tabulate_plan(&plan, &params, &cfg.contour(), &cfg.budget(), &grid, true)?;
    let r = eigen_residual(source_operator(&plan), &params, &psi, eigenvalue_of(&plan, &params)?)?;
    out.push(
        Record::new("eigen/residual/BC2/ground-state", "BC2", 2, "eigen-residual")
            .measured(r.residual, 1e-3)
            .detail(format!("lambda = 0, {} qmc samples per point, 5x5 stencil cross", cfg.quadrature.qmc_samples))
            .timed(secs(t)),
    );
    Ok(out)
}

/// Moving the imaginary offset by `+-0.1` must not change the BC1 values
/// beyond three error estimates. Metric: worst change in units of the bound.
pub fn contour_record(cfg: &RunConfig) -> Result<Record, CliError> {
    let t = Instant::now();
    let plan = plan_for("BC", 1)?;
    let lambda = cfg.spectral.iter().copied().find(|l| *l != 0.0).unwrap_or(0.5);
    let p = params_from(&cfg.couplings_for(2), &[lambda])?;
    let base_c = cfg.contour();
    let mut worst: f64 = 0.0;
    for z in [-0.7, 0.0, 0.4] {
        let x = [Complex64::new(z, 0.0)];
        let base = integrate(&plan, &x, &p, &base_c, &cfg.budget())?;
        for d in [-0.1, 0.1] {
            let c = Contour { branch_offset: base_c.branch_offset + d, ..base_c.clone() };
            let r = integrate(&plan, &x, &p, &c, &cfg.budget())?;
            let bound = 3.0 * base.err_estimate.max(r.err_estimate).max(1e-13 * base.value.norm());
            worst = worst.max((r.value - base.value).norm() / bound);
        }
    }
    Ok(Record::new("eigen/contour-shift/BC1", "BC1", 1, "contour-independence")
        .measured(worst, 1.0)
        .detail(format!("lambda = {lambda}, offset moved by +-0.1"))
        .timed(secs(t)))
}

pub fn degeneration_records(cfg: &RunConfig) -> Result<Vec<Record>, CliError> {
    let mut jobs = Vec::new();
    for n in 1..=3 {
        jobs.push((Limit::G1To0, n));
        jobs.push((Limit::G2To0, n));
    }
    for n in 2..=4 {
        jobs.push((Limit::AffineToOpen, n));
    }
    let seed = cfg.quadrature.seed;
    jobs.par_iter()
        .map(|&(limit, n)| {
            let t = Instant::now();
            let r = degeneration_check(limit, n, 10, &DEFAULT_EPSILONS, seed)?;
            let pair = match limit {
                Limit::G1To0 | Limit::G2To0 => PairId::new(kernels::PairKind::IstarShiftedToBC, n),
                Limit::AffineToOpen => PairId::new(kernels::PairKind::GlAff, n),
            };
            let exact: Vec<String> = r.exact.iter().map(|(s, ok)| format!("{s}: {}", if *ok { "yes" } else { "no" })).collect();
            let mut detail = exact.join("; ");
            if let Some(rate) = r.rate {
                detail.push_str(&format!("; rate {rate:.3} (need {})", limit.required_rate()));
            }
            if let Some(g) = r.pointwise_gap {
                detail.push_str(&format!("; pointwise gap {g:.2e}"));
            }
            let (metric, tol) = match r.extrapolated_gap {
                Some(g) => (g, 1e-6),
                None => (r.exact.iter().filter(|(_, ok)| !ok).count() as f64, 0.0),
            };
            Ok(Record::new(format!("degenerate/{}/n{n}", limit.name()), pair.to_string(), n, "degeneration")
                .measured(metric, tol)
                .with_status(r.passed)
                .detail(detail.trim_start_matches("; ").to_string())
                .timed(secs(t)))
        })
        .collect()
}
