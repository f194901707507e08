//! Coupling limits between kernels and Hamiltonians.
//!
//! `g1 -> 0` is exact: after substitution the BC-type objects coincide with
//! C-type ones up to a relabelling of couplings. The `g2 -> 0` limit of the
//! shifted I*-kernel and the affine-to-open limit of the gl kernel are
//! approached numerically on a sequence of `epsilon`s; the gap at each sample
//! point is fitted to `d0 + A eps^r`.

use std::collections::{BTreeMap, BTreeSet};

use kernels::{build, PairId, PairKind};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use symexpr::{bindings, KernelExpr, NumKernel, Params, ScalarExpr, Sym, Variable};
use toda::{build_hamiltonian, build_hamiltonian_on, Couplings, Series, SystemId};

use crate::NumericError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Limit {
    G1To0,
    G2To0,
    AffineToOpen,
}

impl Limit {
    pub fn parse(s: &str) -> Option<Limit> {
        match s {
            "g1to0" | "g1-to0" => Some(Limit::G1To0),
            "g2to0" | "g2-to0" => Some(Limit::G2To0),
            "affine" | "gnto0" => Some(Limit::AffineToOpen),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Limit::G1To0 => "g1to0",
            Limit::G2To0 => "g2to0",
            Limit::AffineToOpen => "affine",
        }
    }

    /// Convergence order the check demands, in powers of `eps`.
    pub fn required_rate(&self) -> f64 {
        match self {
            Limit::G2To0 => 0.5,
            _ => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegenerationReport {
    pub limit: Limit,
    pub n: u32,
    /// Symbolic equalities checked at `eps = 0`, by name.
    pub exact: Vec<(String, bool)>,
    pub epsilons: Vec<f64>,
    /// Largest relative gap over the sample points, per epsilon.
    pub gaps: Vec<f64>,
    /// Smallest fitted convergence order over the sample points.
    pub rate: Option<f64>,
    pub extrapolated_gap: Option<f64>,
    /// Largest relative gap at the deep point used for the affine limit.
    pub pointwise_gap: Option<f64>,
    pub passed: bool,
}

pub const DEFAULT_EPSILONS: [f64; 5] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];

fn bc_to_c_couplings(n: u32) -> Couplings {
    let mut cc = Couplings::empty().with(1, ScalarExpr::sigma(2).mul(&ScalarExpr::sigma(2)));
    for i in 2..=n {
        cc = cc.with(i, ScalarExpr::g(i + 1));
    }
    cc
}

fn same_kernel_exp(a: &KernelExpr, b: &KernelExpr) -> bool {
    a.exp_arg == b.exp_arg && a.plane_wave == b.plane_wave && a.binomials.values().all(ScalarExpr::is_zero) == b.binomials.values().all(ScalarExpr::is_zero)
}

/// `g1 -> 0`: the BC Hamiltonian becomes the C one, and the shifted
/// I*-kernel becomes the C-to-D kernel (C variables on the BC side).
fn g1_exact(n: u32) -> Result<Vec<(String, bool)>, NumericError> {
    let bc = SystemId::new(Series::BC, n);
    let h = build_hamiltonian(&bc, &Couplings::generic(&bc).with(1, ScalarExpr::zero()), None)?;
    let hc = build_hamiltonian_on(&SystemId::new(Series::C, n), &bc_to_c_couplings(n), None, &h.vars)?;
    let elim = toda::sigma_elimination(h.potential.syms().into_iter().chain(hc.potential.syms()));
    let ham_ok = h.potential.substitute(&elim)?.sub(&hc.potential.substitute(&elim)?).is_zero()?;

    let q = build(&PairId::new(PairKind::IstarShiftedToBC, n))?;
    let k = q.kernel.substitute(&bindings([(Sym::G(1), ScalarExpr::zero())]))?;
    let mut relabel = vec![(Sym::G(1), ScalarExpr::sigma(2).powi(2)?)];
    relabel.extend((1..n).map(|i| (Sym::G(i + 1), ScalarExpr::g(i + 2))));
    let c = build(&PairId::new(PairKind::CToD, n))?.on_vars(&q.dst.vars, &q.src.vars)?;
    let want = c.kernel.substitute(&bindings(relabel))?;
    let zero_exponents = k.binomials.values().all(ScalarExpr::is_zero);
    Ok(vec![
        (format!("H(BC{n}) at g1=0 equals H(C{n})"), ham_ok),
        (format!("shifted I*{n} kernel at g1=0 equals the C{n}-to-D{n} kernel"), zero_exponents && same_kernel_exp(&k, &want)),
    ])
}

/// `g2 -> 0` on the Hamiltonian side: BC becomes B.
fn g2_exact(n: u32) -> Result<Vec<(String, bool)>, NumericError> {
    let bc = SystemId::new(Series::BC, n);
    let h = build_hamiltonian(&bc, &Couplings::generic(&bc).with(2, ScalarExpr::zero()), None)?;
    let mut cb = Couplings::empty().with(1, ScalarExpr::g(1));
    for i in 2..=n {
        cb = cb.with(i, ScalarExpr::g(i + 1));
    }
    let hb = build_hamiltonian_on(&SystemId::new(Series::B, n), &cb, None, &h.vars)?;
    let elim = toda::sigma_elimination(h.potential.syms().into_iter().chain(hb.potential.syms()));
    let ok = h.potential.substitute(&elim)?.sub(&hb.potential.substitute(&elim)?).is_zero()?;
    Ok(vec![(format!("H(BC{n}) at g2=0 equals H(B{n})"), ok)])
}

/// The affine kernel at `g_n = 0` with the `x_n` terms removed is the open
/// step kernel, source and target exchanged.
fn affine_exact(n: u32) -> Result<Vec<(String, bool)>, NumericError> {
    let aff = build(&PairId::new(PairKind::GlAff, n))?;
    let xn = aff.src.vars[n as usize - 1];
    let k = aff.kernel.substitute(&bindings([(Sym::G(n), ScalarExpr::zero())]))?.drop_vars(&BTreeSet::from([xn]));
    let step = build(&PairId::new(PairKind::GlStep, n - 1))?;
    let mut map = BTreeMap::new();
    map.extend(aff.dst.vars.iter().copied().zip(step.src.vars.iter().copied()));
    map.extend(aff.src.vars[..n as usize - 1].iter().copied().zip(step.dst.vars.iter().copied()));
    Ok(vec![(format!("gl-aff[{n}] at g{n}=0 without x{n} equals gl-step[{}]", n - 1), k.rename(&map) == step.kernel)])
}

/// Both sides of a limit, compiled on a common variable list.
struct Sides {
    vars: Vec<Variable>,
    eps_kernel: KernelExpr,
    limit_kernel: KernelExpr,
}

fn g2_sides(n: u32) -> Result<Sides, NumericError> {
    let q = build(&PairId::new(PairKind::IstarShiftedToBC, n))?;
    let b = build(&PairId::new(PairKind::BToBCstar, n))?.on_vars(&q.dst.vars, &q.src.vars)?;
    // B couplings in terms of BC ones: g1 stays, g_i -> g_{i+1} above it
    let relabel: Vec<(Sym, ScalarExpr)> = (2..=n).map(|i| (Sym::G(i), ScalarExpr::g(i + 1))).collect();
    let mut vars = q.dst.vars.clone();
    vars.extend(&q.src.vars);
    Ok(Sides { vars, eps_kernel: q.kernel, limit_kernel: b.kernel.substitute(&bindings(relabel))? })
}

fn affine_sides(n: u32) -> Result<Sides, NumericError> {
    let aff = build(&PairId::new(PairKind::GlAff, n))?;
    let step = build(&PairId::new(PairKind::GlStep, n - 1))?;
    // gl-step source <- aff target, gl-step target <- first n-1 aff sources
    let mut map = BTreeMap::new();
    map.extend(step.src.vars.iter().copied().zip(aff.dst.vars.iter().copied()));
    map.extend(step.dst.vars.iter().copied().zip(aff.src.vars.iter().copied()));
    let mut vars = aff.src.vars.clone();
    vars.extend(&aff.dst.vars);
    Ok(Sides { vars, eps_kernel: aff.kernel, limit_kernel: step.kernel.rename(&map) })
}

/// Fits `d(eps) = d0 + A eps^r` through the last three values
/// (geometric epsilons). Returns `(r, d0)`, or `None` when the differences
/// are at rounding level.
fn fit(eps: &[f64], d: &[Complex64]) -> Option<(f64, Complex64)> {
    let m = d.len();
    if m < 3 {
        return None;
    }
    let (d1, d2, d3) = (d[m - 3], d[m - 2], d[m - 1]);
    let (a, b) = ((d1 - d2).norm(), (d2 - d3).norm());
    if b < 1e-14 || a < 1e-14 {
        return None;
    }
    let q = eps[m - 2] / eps[m - 1];
    let r = (a / b).ln() / q.ln();
    let d0 = d3 - (d2 - d3) / (q.powf(r) - 1.0);
    Some((r, d0))
}

/// Evaluates the limit on `samples` random points for each epsilon.
pub fn degeneration_check(limit: Limit, n: u32, samples: usize, epsilons: &[f64], seed: u64) -> Result<DegenerationReport, NumericError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (exact, sides) = match limit {
        Limit::G1To0 => {
            let exact = g1_exact(n)?;
            let passed = exact.iter().all(|(_, ok)| *ok);
            return Ok(DegenerationReport { limit, n, exact, epsilons: vec![], gaps: vec![], rate: None, extrapolated_gap: None, pointwise_gap: None, passed });
        }
        Limit::G2To0 => (g2_exact(n)?, g2_sides(n)?),
        Limit::AffineToOpen => {
            if n < 2 {
                return Err(NumericError::Config("the affine limit needs n >= 2".into()));
            }
            (affine_exact(n)?, affine_sides(n)?)
        }
    };
    let syms: BTreeSet<Sym> = sides.eps_kernel.syms().into_iter().chain(sides.limit_kernel.syms()).collect();
    let mut per_eps = vec![0.0f64; epsilons.len()];
    let mut rate: Option<f64> = None;
    let mut extrap: f64 = 0.0;
    let mut fitted_all = true;
    let mut pointwise: Option<f64> = None;
    for _ in 0..samples {
        let mut base = Params::new();
        for s in &syms {
            if matches!(s, Sym::G(_)) {
                base = base.with(*s, rng.gen_range(0.5..1.5));
            }
        }
        let mut x: Vec<Complex64> = sides.vars.iter().map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
        let lim = NumKernel::compile(&sides.limit_kernel, &base, &sides.vars)?.log_eval(&x);
        let mut d = Vec::with_capacity(epsilons.len());
        for (k, &eps) in epsilons.iter().enumerate() {
            let mut p = base.clone();
            match limit {
                Limit::G2To0 => {
                    p.remove(Sym::G(2));
                    p.set(Sym::Sigma(2), Complex64::new((eps / 2.0).sqrt(), 0.0));
                }
                _ => {
                    p.set(Sym::G(n), Complex64::new(eps * eps, 0.0));
                    x[n as usize - 1] = Complex64::new(eps.ln(), 0.0);
                }
            }
            let v = NumKernel::compile(&sides.eps_kernel, &p, &sides.vars)?.log_eval(&x);
            let gap = (v - lim).exp() - 1.0;
            per_eps[k] = per_eps[k].max(gap.norm());
            d.push(gap);
        }
        match fit(epsilons, &d) {
            Some((r, d0)) => {
                rate = Some(rate.map_or(r, |m: f64| m.min(r)));
                extrap = extrap.max(d0.norm());
            }
            None => fitted_all &= d.last().is_some_and(|g| g.norm() < 1e-12),
        }
        if limit == Limit::AffineToOpen {
            let mut p = base.clone();
            p.set(Sym::G(n), Complex64::new(1e-40, 0.0));
            x[n as usize - 1] = Complex64::new(-60.0, 0.0);
            let v = NumKernel::compile(&sides.eps_kernel, &p, &sides.vars)?.log_eval(&x);
            let g = ((v - lim).exp() - 1.0).norm();
            pointwise = Some(pointwise.map_or(g, |m: f64| m.max(g)));
        }
    }
    let rate_ok = rate.is_none_or(|r| r >= 0.9 * limit.required_rate());
    let passed = exact.iter().all(|(_, ok)| *ok) && fitted_all && rate_ok && extrap < 1e-6 && pointwise.is_none_or(|g| g < 1e-8);
    Ok(DegenerationReport {
        limit,
        n,
        exact,
        epsilons: epsilons.to_vec(),
        gaps: per_eps,
        rate,
        extrapolated_gap: Some(extrap),
        pointwise_gap: pointwise,
        passed,
    })
}
