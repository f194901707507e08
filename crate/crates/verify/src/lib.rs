//! Zero certificates for intertwining identities.
//!
//! For a kernel `K` and Schrödinger operators `H_src`, `H_dst` on disjoint
//! variable sets, the residual
//! `(H_src K - H_dst K) / K = sum_src -1/2 (d L + L^2) + V_src + s_src - (same for dst)`
//! with `L_v = d_v log K` is an element of [`RatExp`]; the identity holds iff
//! it is zero.

use std::collections::BTreeSet;
use std::time::Instant;

use kernels::{build, readings, CompositeKernel, Elementary, KernelError, PairId};
use rayon::prelude::*;
use serde::Serialize;
use symexpr::{Bindings, ExpMonomial, KernelExpr, RatExp, ScalarExpr, Sym, SymError, Variable};
use toda::{sigma_elimination, SchrodingerOp};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("source and target share variables {0:?}")]
    SharedVariables(Vec<String>),
    #[error("kernel depends on variables outside source and target: {0:?}")]
    StrayVariables(Vec<String>),
    #[error("link {link} of {plan} is not certified")]
    UncertifiedLink { plan: String, link: usize },
    #[error("{plan}: chained shift {got} differs from the claimed {want}")]
    ShiftMismatch { plan: String, got: String, want: String },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Sym(#[from] SymError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    CertifiedZero,
    Nonzero,
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub pair: String,
    pub n: u32,
    pub status: Status,
    /// Surviving monomial of the cleared numerator.
    pub witness: Option<ExpMonomial>,
    pub reading: String,
    pub bases: usize,
    pub numerator_terms: usize,
    pub elapsed_ms: f64,
}

impl Certificate {
    pub fn is_zero(&self) -> bool {
        self.status == Status::CertifiedZero
    }
}

impl PartialEq for Certificate {
    /// Equality ignores timing.
    fn eq(&self, o: &Self) -> bool {
        (&self.pair, self.n, self.status, &self.witness, &self.reading, self.bases, self.numerator_terms)
            == (&o.pair, o.n, o.status, &o.witness, &o.reading, o.bases, o.numerator_terms)
    }
}

/// `sum_v -1/2 (d_v L_v + L_v^2)` over `vars`.
fn kinetic(k: &KernelExpr, vars: &[Variable]) -> Result<RatExp, SymError> {
    let half = ScalarExpr::from_ratio(-1, 2);
    let mut r = RatExp::zero();
    for v in vars {
        let l = k.dlog(*v)?;
        r = r.add(&l.deriv(*v).add(&l.mul(&l)).scale(&half));
    }
    Ok(r)
}

/// Substitution `g_i := 2 sigma_i^2` for every `sigma_i` the inputs mention.
pub fn elimination_for(k: &KernelExpr, ops: &[&SchrodingerOp]) -> Bindings {
    let mut syms: BTreeSet<Sym> = k.syms();
    for h in ops {
        syms.extend(h.potential.syms());
        syms.extend(h.shift.syms());
    }
    sigma_elimination(syms)
}

/// `(H_src K - H_dst K) / K` after eliminating `g_i` in favour of `sigma_i`.
pub fn intertwine_residual(src: &SchrodingerOp, dst: &SchrodingerOp, k: &KernelExpr) -> Result<RatExp, VerifyError> {
    let shared: Vec<String> = src.vars.iter().filter(|v| dst.vars.contains(v)).map(|v| v.name()).collect();
    if !shared.is_empty() {
        return Err(VerifyError::SharedVariables(shared));
    }
    let stray: Vec<String> = k.vars().into_iter().filter(|v| !src.vars.contains(v) && !dst.vars.contains(v)).map(|v| v.name()).collect();
    if !stray.is_empty() {
        return Err(VerifyError::StrayVariables(stray));
    }
    let map = elimination_for(k, &[src, dst]);
    let k = k.substitute(&map)?;
    let (src, dst) = (src.substitute(&map).map_err(toda_err)?, dst.substitute(&map).map_err(toda_err)?);
    let lhs = kinetic(&k, &src.vars)?.add(&src.potential).add(&RatExp::constant(src.shift.clone()));
    let rhs = kinetic(&k, &dst.vars)?.add(&dst.potential).add(&RatExp::constant(dst.shift.clone()));
    Ok(lhs.sub(&rhs))
}

fn toda_err(e: toda::TodaError) -> VerifyError {
    VerifyError::Kernel(KernelError::Toda(e))
}

/// Certificate for a given kernel and pair of operators.
pub fn certify_parts(pair: &PairId, reading: &str, src: &SchrodingerOp, dst: &SchrodingerOp, k: &KernelExpr) -> Result<Certificate, VerifyError> {
    let t = Instant::now();
    let r = intertwine_residual(src, dst, k)?;
    let z = r.zero_test()?;
    Ok(Certificate {
        pair: pair.to_string(),
        n: pair.n,
        status: if z.is_zero { Status::CertifiedZero } else { Status::Nonzero },
        witness: if z.is_zero { None } else { z.witness },
        reading: reading.to_string(),
        bases: z.bases,
        numerator_terms: z.numerator_terms,
        elapsed_ms: t.elapsed().as_secs_f64() * 1e3,
    })
}

pub fn certify_elementary(e: &Elementary) -> Result<Certificate, VerifyError> {
    certify_parts(&e.pair, e.reading, &e.src, &e.dst, &e.kernel)
}

/// Certifies the catalog reading of `pair`.
pub fn certify(pair: &PairId) -> Result<Certificate, VerifyError> {
    certify_elementary(&build(pair)?)
}

/// Certifies many pairs in parallel; output order follows input order.
pub fn certify_all(pairs: &[PairId]) -> Vec<Result<Certificate, VerifyError>> {
    pairs.par_iter().map(certify).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ArbiterReport {
    pub pair: String,
    /// Index of the unique certifying reading, if exactly one certifies.
    pub chosen: Option<usize>,
    pub statuses: Vec<(String, Status)>,
    pub certificates: Vec<Certificate>,
}

impl ArbiterReport {
    pub fn chosen_label(&self) -> Option<&str> {
        self.chosen.map(|i| self.statuses[i].0.as_str())
    }
}

/// Certifies each candidate reading of an ambiguous display and picks the
/// unique one whose residual vanishes.
pub fn typo_arbiter(pair: &PairId) -> Result<ArbiterReport, VerifyError> {
    let rs = readings(pair)?;
    let certs = rs.iter().map(|r| certify_parts(pair, r.label, &r.src, &r.dst, &r.kernel)).collect::<Result<Vec<_>, _>>()?;
    let zeros: Vec<usize> = certs.iter().enumerate().filter(|(_, c)| c.is_zero()).map(|(i, _)| i).collect();
    Ok(ArbiterReport {
        pair: pair.to_string(),
        chosen: if zeros.len() == 1 { Some(zeros[0]) } else { None },
        statuses: certs.iter().map(|c| (c.reading.clone(), c.status)).collect(),
        certificates: certs,
    })
}

/// Certificates with one source coupling (or `sigma`) doubled, keeping the
/// kernel and target fixed. One entry per coupling symbol in the source
/// potential.
pub fn negative_controls(pair: &PairId) -> Result<Vec<(Sym, Certificate)>, VerifyError> {
    let e = build(pair)?;
    let map = elimination_for(&e.kernel, &[&e.src, &e.dst]);
    let src = e.src.substitute(&map).map_err(toda_err)?;
    let mut out = Vec::new();
    for s in src.potential.syms() {
        if !matches!(s, Sym::G(_) | Sym::Sigma(_)) {
            continue;
        }
        let twice: Bindings = [(s, ScalarExpr::from_int(2).mul(&ScalarExpr::sym(s)))].into_iter().collect();
        let mut h = src.clone();
        h.potential = h.potential.substitute(&twice)?;
        let c = certify_parts(pair, &format!("{} with {} doubled", e.reading, s.name()), &h, &e.dst, &e.kernel)?;
        out.push((s, c));
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct CompositeCertificate {
    pub plan: String,
    pub links: Vec<Certificate>,
    pub source: String,
    pub target: String,
    /// `sum_j (s_dst - s_src)` along the chain: `H_src Psi = Psi (H_dst + shift)`.
    pub shift: ScalarExpr,
    pub claimed_shift: ScalarExpr,
    pub status: Status,
}

/// Certifies every link, checks the glue, and sums the scalar shifts along
/// the chain. For eigenfunction plans ending at the empty system the summed
/// shift is the eigenvalue.
pub fn composite_certificate(plan: &CompositeKernel) -> Result<CompositeCertificate, VerifyError> {
    plan.check_glue()?;
    let links = plan.nodes.iter().map(certify_elementary).collect::<Result<Vec<_>, _>>()?;
    if let Some(i) = links.iter().position(|c| !c.is_zero()) {
        return Err(VerifyError::UncertifiedLink { plan: plan.label.clone(), link: i + 1 });
    }
    let shift = plan.nodes.iter().fold(ScalarExpr::zero(), |s, e| s.add(&e.dst.shift).sub(&e.src.shift));
    if shift != plan.claimed_shift {
        return Err(VerifyError::ShiftMismatch { plan: plan.label.clone(), got: shift.latex(), want: plan.claimed_shift.latex() });
    }
    let last = plan.nodes.last().map(|e| e.dst.id.to_string()).unwrap_or_default();
    Ok(CompositeCertificate {
        plan: plan.label.clone(),
        links,
        source: plan.source().to_string(),
        target: last,
        shift,
        claimed_shift: plan.claimed_shift.clone(),
        status: Status::CertifiedZero,
    })
}
