//! Kernel transcriptions.
//!
//! Every kernel is `prefactor * exp(sum c e^{L}) * e^{sum p_v v} * prod (1 + s e^{L})^{q}`.
//! A pair may have several readings of its display; the first one listed
//! is the catalog choice (the one whose residual certifies), the others are
//! kept for the arbiter and for the record.

use std::collections::BTreeMap;

use serde::Serialize;
use symexpr::{Family, KernelExpr, LinearForm, ScalarExpr, Variable};
use toda::{build_hamiltonian_on, Couplings, SchrodingerOp, Series, SystemId};

use crate::pair::{PairId, PairKind};
use crate::KernelError;

/// A kernel together with the two Hamiltonians it intertwines:
/// `(H_src + shift_src) K = (H_dst + shift_dst) K`, each acting in its own variables.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Elementary {
    pub pair: PairId,
    pub reading: &'static str,
    pub kernel: KernelExpr,
    pub src: SchrodingerOp,
    pub dst: SchrodingerOp,
}

impl Elementary {
    /// Same pair on other variables (positional renaming).
    pub fn on_vars(&self, src: &[Variable], dst: &[Variable]) -> Result<Elementary, KernelError> {
        let mut map = BTreeMap::new();
        map.extend(self.src.vars.iter().copied().zip(src.iter().copied()));
        map.extend(self.dst.vars.iter().copied().zip(dst.iter().copied()));
        Ok(Elementary {
            kernel: self.kernel.rename(&map),
            src: self.src.on_vars(src)?,
            dst: self.dst.on_vars(dst)?,
            ..self.clone()
        })
    }

    /// Transposed pair with the same kernel.
    pub fn inverted(&self) -> Elementary {
        Elementary { pair: self.pair.inverted(), src: self.dst.clone(), dst: self.src.clone(), ..self.clone() }
    }
}

/// One candidate transcription of an ambiguous display.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reading {
    pub label: &'static str,
    pub note: &'static str,
    pub kernel: KernelExpr,
    pub src: SchrodingerOp,
    pub dst: SchrodingerOp,
}

fn int(k: i64) -> ScalarExpr {
    ScalarExpr::from_int(k)
}

/// Exponent builder over two variable lists, 1-based.
struct Kb<'a> {
    x: &'a [Variable],
    z: &'a [Variable],
    k: KernelExpr,
}

#[derive(Clone, Copy)]
enum V {
    X(usize),
    Z(usize),
}

impl<'a> Kb<'a> {
    fn new(x: &'a [Variable], z: &'a [Variable]) -> Self {
        Kb { x, z, k: KernelExpr::one() }
    }

    fn var(&self, v: V) -> Variable {
        match v {
            V::X(i) => self.x[i - 1],
            V::Z(i) => self.z[i - 1],
        }
    }

    fn form(&self, t: &[(V, i64)]) -> LinearForm {
        LinearForm::from_terms(&t.iter().map(|(v, c)| (self.var(*v), *c)).collect::<Vec<_>>())
    }

    /// Adds `-c e^{L}` to the exponent.
    fn e(&mut self, c: ScalarExpr, t: &[(V, i64)]) {
        let l = self.form(t);
        self.k = std::mem::take(&mut self.k).exp_term(c.neg(), l);
    }

    fn bin(&mut self, scale: i64, t: &[(V, i64)], p: ScalarExpr) {
        let l = self.form(t);
        self.k = std::mem::take(&mut self.k).binomial(int(scale), l, p);
    }

    /// `e^{p (sum z - sum x)}`.
    fn plane(&mut self, p: &ScalarExpr) {
        let mut l = LinearForm::zero();
        for v in self.z {
            l = l.add(&LinearForm::var(*v));
        }
        for v in self.x {
            l = l.sub(&LinearForm::var(*v));
        }
        self.k = std::mem::take(&mut self.k).plane(p, &l);
    }
}

fn vars(f: Family, len: u32) -> Vec<Variable> {
    Variable::layer_vec(f, len, len)
}

fn ham(id: SystemId, v: &[Variable], c: Couplings, shift: Option<ScalarExpr>) -> Result<SchrodingerOp, KernelError> {
    Ok(build_hamiltonian_on(&id, &c, shift, v)?)
}

fn generic(id: SystemId) -> Couplings {
    Couplings::generic(&id)
}

/// Open-chain body shared by the B/C/D/BC*-type kernels:
/// `sum_{i=1}^{m} (e^{a_i - b_i} + g_{i+1} e^{b_{i+1} - a_i})`.
fn ladder(kb: &mut Kb<'_>, a: fn(usize) -> V, b: fn(usize) -> V, m: usize, c: &Couplings) -> Result<(), KernelError> {
    for i in 1..=m {
        kb.e(int(1), &[(a(i), 1), (b(i), -1)]);
        if i < m || m < kb_len(kb, b) {
            kb.e(c.get(i as u32 + 1)?, &[(b(i + 1), 1), (a(i), -1)]);
        }
    }
    Ok(())
}

fn kb_len(kb: &Kb<'_>, f: fn(usize) -> V) -> usize {
    match f(1) {
        V::X(_) => kb.x.len(),
        V::Z(_) => kb.z.len(),
    }
}

/// Inozemtsev-side body `sigma_2 (e^{x_1+z_1} + e^{x_1-z_1}) + sum_{i=2}^{n}
/// (g_{i+1} e^{z_i - x_{i-1}} + e^{x_i - z_i})` with the trailing term inside
/// the sum, plus `(1-e^{z_1})^{c} (1+e^{z_1})^{-c}`.
fn bc_i_body(kb: &mut Kb<'_>, c: &Couplings, n: usize, trailing_inside: bool) -> Result<(), KernelError> {
    let s2 = c.sigma(2)?;
    if n >= 1 {
        kb.e(s2.clone(), &[(V::X(1), 1), (V::Z(1), 1)]);
        kb.e(s2.clone(), &[(V::X(1), 1), (V::Z(1), -1)]);
    }
    for i in 2..=n {
        kb.e(c.get(i as u32 + 1)?, &[(V::Z(i), 1), (V::X(i - 1), -1)]);
        if trailing_inside || i == n {
            kb.e(int(1), &[(V::X(i), 1), (V::Z(i), -1)]);
        }
    }
    let cc = c.get(1)?.div(&int(2).mul(&s2))?;
    kb.bin(-1, &[(V::Z(1), 1)], cc.clone());
    kb.bin(1, &[(V::Z(1), 1)], cc.neg());
    Ok(())
}

/// All readings of a pair, the catalog choice first. Inverse pairs get the
/// readings of the forward pair with source and target swapped.
pub fn readings(pair: &PairId) -> Result<Vec<Reading>, KernelError> {
    pair.validate()?;
    let mut out = forward_readings(pair)?;
    if pair.inverse {
        for r in out.iter_mut() {
            std::mem::swap(&mut r.src, &mut r.dst);
        }
    }
    Ok(out)
}

/// Catalog choice for a pair.
pub fn build(pair: &PairId) -> Result<Elementary, KernelError> {
    let r = readings(pair)?.into_iter().next().ok_or_else(|| KernelError::UnknownPair(pair.to_string()))?;
    Ok(Elementary { pair: *pair, reading: r.label, kernel: r.kernel, src: r.src, dst: r.dst })
}

/// Kernel expression of the catalog choice.
pub fn build_kernel(pair: &PairId) -> Result<KernelExpr, KernelError> {
    Ok(build(pair)?.kernel)
}

fn one(label: &'static str, note: &'static str, kernel: KernelExpr, src: SchrodingerOp, dst: SchrodingerOp) -> Reading {
    Reading { label, note, kernel, src, dst }
}

fn forward_readings(pair: &PairId) -> Result<Vec<Reading>, KernelError> {
    let n = pair.n;
    let nu = n as usize;
    let (sid, tid) = pair.kind.systems(n);
    let p = pair.param.expr();
    let iota = ScalarExpr::iota();
    let x = |len| vars(Family::X, len);
    let z = |len| vars(Family::Z, len);
    let y = |len| vars(Family::Y, len);
    let out = match pair.kind {
        PairKind::GlStep => {
            // source x_{n+1}, target x_n
            let (xs, ys) = (x(n + 1), x(n));
            let c = generic(sid);
            let mut kb = Kb::new(&xs, &ys);
            for i in 1..=nu {
                kb.e(int(1), &[(V::Z(i), 1), (V::X(i), -1)]);
                kb.e(c.get(i as u32)?, &[(V::X(i + 1), 1), (V::Z(i), -1)]);
            }
            vec![one("default", "", kb.k, ham(sid, &xs, c, None)?, ham(tid, &ys, generic(tid), None)?)]
        }
        PairKind::GlAff => {
            let (xs, ys) = (x(n), y(n));
            let c = generic(sid);
            let mut kb = Kb::new(&xs, &ys);
            for i in 1..=nu {
                kb.e(int(1), &[(V::X(i), 1), (V::Z(i), -1)]);
                kb.e(c.get(i as u32)?, &[(V::Z(i % nu + 1), 1), (V::X(i), -1)]);
            }
            vec![one("default", "", kb.k, ham(sid, &xs, c.clone(), None)?, ham(tid, &ys, c, None)?)]
        }
        PairKind::A1affPG => {
            let m = nu + 1;
            let (xs, ys) = (x(n + 1), y(n + 1));
            let c = generic(sid);
            let mut kb = Kb::new(&xs, &ys);
            for i in 1..=m {
                kb.e(int(1), &[(V::X(i), 1), (V::Z(i), -1)]);
                kb.e(c.get((i % m) as u32 + 1)?, &[(V::Z(i % m + 1), 1), (V::X(i), -1)]);
            }
            vec![one("default", "", kb.k, ham(sid, &xs, c.clone(), None)?, ham(tid, &ys, c, None)?)]
        }
        PairKind::BCstarToB => {
            let (zs, xs) = (z(n), x(n - 1));
            let c = generic(sid);
            let mut kb = Kb::new(&xs, &zs);
            kb.e(c.get(1)?, &[(V::Z(1), 1)]);
            for i in 1..nu {
                kb.e(int(1), &[(V::X(i), 1), (V::Z(i), -1)]);
                kb.e(c.get(i as u32 + 1)?, &[(V::Z(i + 1), 1), (V::X(i), -1)]);
            }
            vec![one("default", "", kb.k, ham(sid, &zs, c, None)?, ham(tid, &xs, generic(tid), None)?)]
        }
        PairKind::BToBCstar | PairKind::Binf => {
            let (xs, zs) = (x(n), z(n));
            let k = b_bcstar_kernel(&xs, &zs, &generic(sid))?;
            vec![one("default", "", k, ham(sid, &xs, generic(sid), None)?, ham(tid, &zs, generic(tid), None)?)]
        }
        PairKind::CToD | PairKind::Cinf => {
            let (zs, xs) = (z(n), x(n));
            let k = c_d_kernel(&zs, &xs, &generic(sid))?;
            vec![one("default", "", k, ham(sid, &zs, generic(sid), None)?, ham(tid, &xs, generic(tid), None)?)]
        }
        PairKind::Dinf => {
            let (xs, zs) = (x(n), z(n));
            let c = generic(tid);
            vec![
                one(
                    "hamiltonian-labels",
                    "C-type kernel with D variables x and C variables z, following the Hamiltonians",
                    c_d_kernel(&zs, &xs, &c)?,
                    ham(sid, &xs, generic(sid), None)?,
                    ham(tid, &zs, c.clone(), None)?,
                ),
                one(
                    "argument-labels",
                    "kernel arguments as written, C variables x and D variables z",
                    c_d_kernel(&xs, &zs, &c)?,
                    ham(sid, &xs, generic(sid), None)?,
                    ham(tid, &zs, c, None)?,
                ),
            ]
        }
        PairKind::DToC => {
            let (xs, zs) = (x(n), z(n - 1));
            let c = generic(sid);
            let mut kb = Kb::new(&xs, &zs);
            if nu > 1 {
                kb.e(c.get(1)?, &[(V::X(1), 1), (V::Z(1), 1)]);
            }
            for i in 1..nu {
                kb.e(int(1), &[(V::Z(i), 1), (V::X(i), -1)]);
                kb.e(c.get(i as u32 + 1)?, &[(V::X(i + 1), 1), (V::Z(i), -1)]);
            }
            vec![one("default", "", kb.k, ham(sid, &xs, c, None)?, ham(tid, &zs, generic(tid), None)?)]
        }
        PairKind::BCToIstar => {
            let (xs, zs) = (x(n), z(n));
            let c = generic(sid);
            let mut res = Vec::new();
            for (label, note, inside) in [
                ("sum-inside", "trailing e^{x_i - z_i} inside the sum", true),
                ("sum-outside", "only e^{x_n - z_n} outside the sum", false),
            ] {
                let mut kb = Kb::new(&xs, &zs);
                bc_i_body(&mut kb, &c, nu, inside)?;
                res.push(one(label, note, kb.k, ham(sid, &xs, c.clone(), None)?, ham(tid, &zs, generic(tid), None)?));
            }
            res
        }
        PairKind::BCToIstarNext => {
            let (xs, zs) = (x(n), z(n + 1));
            let c = generic(tid);
            let mut kb = Kb::new(&xs, &zs);
            bc_i_body(&mut kb, &c, nu, true)?;
            kb.e(c.get(n + 2)?, &[(V::Z(nu + 1), 1), (V::X(nu), -1)]);
            vec![one("default", "", kb.k, ham(sid, &xs, generic(sid), None)?, ham(tid, &zs, c, None)?)]
        }
        PairKind::IToBC | PairKind::INextToBC => {
            let next = pair.kind == PairKind::INextToBC;
            let m = if next { n + 1 } else { n };
            let (zs, xs) = (z(m), x(n));
            let c = generic(sid).with_deformation(iota.mul(&p));
            let shift = next.then(|| p.mul(&p).mul(&ScalarExpr::from_ratio(-1, 2)));
            let mut res = Vec::new();
            for (label, note, e2) in [
                ("default", "binomial (1 - e^{2 z_1})^{-i p}", int(1)),
                ("printed-exponent", "binomial (1 - e^{2 z_1})^{-2 i p}", int(2)),
            ] {
                let mut kb = Kb::new(&xs, &zs);
                bc_i_body(&mut kb, &c, nu, true)?;
                if next && nu >= 1 {
                    kb.e(c.get(n + 2)?, &[(V::Z(nu + 1), 1), (V::X(nu), -1)]);
                }
                kb.plane(&iota.mul(&p));
                kb.bin(-1, &[(V::Z(1), 2)], e2.mul(&iota).mul(&p).neg());
                res.push(one(label, note, kb.k, ham(sid, &zs, c.clone(), shift.clone())?, ham(tid, &xs, generic(tid), None)?));
            }
            res
        }
        PairKind::IstarShiftedToBC => {
            let (zs, xs) = (z(n), x(n));
            let c = generic(tid);
            let mut kb = Kb::new(&xs, &zs);
            bc_i_body(&mut kb, &c, nu, true)?;
            let k = kb.k.shift_log(zs[0], &c.sigma(2)?)?;
            vec![one("default", "", k, ham(sid, &zs, generic(sid), None)?, ham(tid, &xs, c, None)?)]
        }
        PairKind::A2even => {
            let (xs, zs) = (x(n), z(n + 1));
            let c = generic(sid);
            let mut kb = Kb::new(&xs, &zs);
            kb.e(c.get(1)?, &[(V::Z(1), 1)]);
            ladder(&mut kb, V::X, V::Z, nu, &c)?;
            kb.e(c.get(n + 2)?, &[(V::Z(nu + 1), -1), (V::X(nu), -1)]);
            vec![one("default", "", kb.k, ham(sid, &xs, c, None)?, ham(tid, &zs, generic(tid), None)?)]
        }
        PairKind::A2odd | PairKind::B1aff => {
            let (xs, zs) = (x(n), z(n));
            let c = generic(sid);
            let mut kb = Kb::new(&xs, &zs);
            if pair.kind == PairKind::A2odd {
                kb.e(c.get(1)?, &[(V::X(1), 1), (V::Z(1), 1)]);
            } else {
                kb.e(c.get(1)?, &[(V::Z(1), 1)]);
            }
            ladder(&mut kb, V::X, V::Z, nu, &c)?;
            kb.e(c.get(n + 1)?, &[(V::X(nu), -1), (V::Z(nu), -1)]);
            vec![one("default", "", kb.k, ham(sid, &xs, c, None)?, ham(tid, &zs, generic(tid), None)?)]
        }
        PairKind::C1aff => {
            let (xs, zs) = (x(n), z(n + 1));
            let c = generic(tid);
            let mut kb = Kb::new(&xs, &zs);
            kb.e(c.get(1)?, &[(V::X(1), 1), (V::Z(1), 1)]);
            ladder(&mut kb, V::X, V::Z, nu, &c)?;
            kb.e(c.get(n + 2)?, &[(V::Z(nu + 1), -1), (V::X(nu), -1)]);
            let mut res = vec![one("default", "", kb.k.clone(), ham(sid, &xs, generic(sid), None)?, ham(tid, &zs, c.clone(), None)?)];
            if n == 1 {
                res.push(one("printed", "rank-two D^{(1)} without the e_1 - e_2 term", kb.k, ham(sid, &xs, generic(sid), None)?, ham(tid.printed(), &zs, c, None)?));
            }
            res
        }
        PairKind::D1aff => {
            let (xs, zs) = (x(n), z(n - 1));
            let c = generic(sid);
            let mut kb = Kb::new(&xs, &zs);
            kb.e(c.get(1)?, &[(V::X(1), 1), (V::Z(1), 1)]);
            for i in 1..nu {
                kb.e(int(1), &[(V::Z(i), 1), (V::X(i), -1)]);
                kb.e(c.get(i as u32 + 1)?, &[(V::X(i + 1), 1), (V::Z(i), -1)]);
            }
            kb.e(c.get(n + 1)?, &[(V::X(nu), -1), (V::Z(nu - 1), -1)]);
            let mut res = vec![one("default", "", kb.k.clone(), ham(sid, &xs, c.clone(), None)?, ham(tid, &zs, generic(tid), None)?)];
            if n == 2 {
                res.push(one("printed", "rank-two D^{(1)} without the e_1 - e_2 term", kb.k, ham(sid.printed(), &xs, c, None)?, ham(tid, &zs, generic(tid), None)?));
            }
            res
        }
        PairKind::D2aff => {
            let (xs, zs) = (x(n), z(n + 1));
            let c = generic(sid);
            let mut kb = Kb::new(&xs, &zs);
            kb.e(c.get(1)?, &[(V::Z(1), 1)]);
            ladder(&mut kb, V::X, V::Z, nu, &c)?;
            kb.e(c.get(n + 2)?, &[(V::Z(nu + 1), -1)]);
            vec![
                one("default", "last term g_{n+1} g_{n+2} e^{-x_n}", kb.k.clone(), ham(sid, &xs, c.clone(), None)?, ham(tid, &zs, generic(tid), None)?),
                one("printed", "last term g_{n+1} e^{-x_n}", kb.k, ham(sid.printed(), &xs, c, None)?, ham(tid, &zs, generic(tid), None)?),
            ]
        }
        PairKind::HatIToHatBC => {
            let (zs, xs) = (z(n + 1), x(n));
            let cb = generic(tid);
            let ci = generic(sid).with_deformation(p.clone());
            let hat_kernel = |shifted_index: bool| -> Result<KernelExpr, KernelError> {
                let mut kb = Kb::new(&xs, &zs);
                let s2 = cb.sigma(2)?;
                let sr = cb.sigma(n + 2)?;
                kb.e(s2.clone(), &[(V::X(1), 1), (V::Z(1), 1)]);
                kb.e(s2.clone(), &[(V::X(1), 1), (V::Z(1), -1)]);
                for k in 1..nu {
                    kb.e(cb.get(k as u32 + 2)?, &[(V::Z(k + 1), 1), (V::X(k), -1)]);
                    let zk = if shifted_index { V::Z(k) } else { V::Z(k + 1) };
                    kb.e(int(1), &[(V::X(k + 1), 1), (zk, -1)]);
                }
                kb.e(sr.clone(), &[(V::Z(nu + 1), 1), (V::X(nu), -1)]);
                kb.e(sr.clone(), &[(V::Z(nu + 1), -1), (V::X(nu), -1)]);
                let c1 = cb.get(1)?.div(&int(2).mul(&s2))?;
                let c2 = cb.get(n + 3)?.div(&int(2).mul(&sr))?;
                kb.bin(-1, &[(V::Z(1), 1)], c1.clone());
                kb.bin(1, &[(V::Z(1), 1)], c1.neg());
                kb.bin(-1, &[(V::Z(nu + 1), 1)], c2.clone());
                kb.bin(1, &[(V::Z(nu + 1), 1)], c2.neg());
                kb.bin(-1, &[(V::Z(nu + 1), -2)], p.clone());
                kb.bin(-1, &[(V::Z(1), 2)], p.neg());
                kb.plane(&p);
                Ok(kb.k)
            };
            let hi = |printed: bool| {
                let id = if printed { sid.printed() } else { sid };
                ham(id, &zs, ci.clone(), None)
            };
            let hb = |printed: bool| {
                let id = if printed { tid.printed() } else { tid };
                ham(id, &xs, cb.clone(), None)
            };
            vec![
                one("default", "e^{x_{k+1} - z_{k+1}}, + sign on g_{n+3}, mirrored right end of hatI", hat_kernel(false)?, hi(false)?, hb(false)?),
                one("kernel-index", "e^{x_{k+1} - z_k}", hat_kernel(true)?, hi(false)?, hb(false)?),
                one("printed-sign", "- g_{n+3} e^{-x_n} in hatBC", hat_kernel(false)?, hi(false)?, hb(true)?),
                one("printed-hati", "hatI right end as printed", hat_kernel(false)?, hi(true)?, hb(false)?),
            ]
        }
        PairKind::BCinf => {
            let (xs, zs) = (x(n), z(n));
            let cb = generic(sid);
            let ci = generic(tid).with_deformation(p.clone());
            let kernel = |off: u32| -> Result<KernelExpr, KernelError> {
                let mut kb = Kb::new(&xs, &zs);
                let s2 = cb.sigma(2)?;
                kb.e(s2.clone(), &[(V::X(1), 1), (V::Z(1), 1)]);
                kb.e(s2.clone(), &[(V::X(1), 1), (V::Z(1), -1)]);
                for i in 1..nu {
                    kb.e(cb.get(i as u32 + off)?, &[(V::Z(i + 1), 1), (V::X(i), -1)]);
                    kb.e(int(1), &[(V::X(i + 1), 1), (V::Z(i + 1), -1)]);
                }
                let cc = cb.get(1)?.div(&int(2).mul(&s2))?;
                kb.bin(1, &[(V::Z(1), 1)], cc.neg().sub(&p));
                kb.bin(-1, &[(V::Z(1), 1)], cc.sub(&p));
                kb.plane(&p);
                Ok(kb.k)
            };
            let hb = ham(sid, &xs, cb.clone(), None)?;
            let hi = |printed: bool| ham(if printed { tid.printed() } else { tid }, &zs, ci.clone(), None);
            let mut res = vec![one("default", "coupling g_{i+2} on e^{z_{i+1} - x_i}", kernel(2)?, hb.clone(), hi(false)?)];
            if n >= 2 {
                res.push(one("printed-coupling", "coupling g_{i+1} on e^{z_{i+1} - x_i}", kernel(1)?, hb.clone(), hi(false)?));
                res.push(one("printed-hamiltonian", "I_inf second boundary term as printed", kernel(2)?, hb, hi(true)?));
            }
            res
        }
    };
    Ok(out)
}

/// `-(g_1 e^{z_1} + sum_{i<n} (e^{x_i - z_i} + g_{i+1} e^{z_{i+1} - x_i}) + e^{x_n - z_n})`.
fn b_bcstar_kernel(xs: &[Variable], zs: &[Variable], c: &Couplings) -> Result<KernelExpr, KernelError> {
    let n = xs.len();
    let mut kb = Kb::new(xs, zs);
    kb.e(c.get(1)?, &[(V::Z(1), 1)]);
    ladder(&mut kb, V::X, V::Z, n, c)?;
    Ok(kb.k)
}

/// `-(g_1 e^{x_1 + z_1} + sum_{i<n} (e^{z_i - x_i} + g_{i+1} e^{x_{i+1} - z_i}) + e^{z_n - x_n})`
/// with C variables `zs` and D variables `xs`.
fn c_d_kernel(zs: &[Variable], xs: &[Variable], c: &Couplings) -> Result<KernelExpr, KernelError> {
    let n = xs.len();
    let mut kb = Kb::new(xs, zs);
    kb.e(c.get(1)?, &[(V::X(1), 1), (V::Z(1), 1)]);
    ladder(&mut kb, V::Z, V::X, n, c)?;
    Ok(kb.k)
}

/// Every series that appears as the source or target of some pair.
pub fn systems_in_catalog() -> Vec<Series> {
    let mut v: Vec<Series> = PairKind::ALL
        .iter()
        .flat_map(|k| {
            let (a, b) = k.systems(k.min_n().max(2));
            [a.series, b.series]
        })
        .collect();
    v.sort();
    v.dedup();
    v
}
