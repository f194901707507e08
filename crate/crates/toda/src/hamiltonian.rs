//! Quadratic Hamiltonians `-1/2 sum d^2 + V + shift`.

use serde::Serialize;
use symexpr::{BinomBase, Family, ExpPoly, LinearForm, RatExp, ScalarExpr, SymError, Variable};

use crate::couplings::deformation_of;
use crate::{Couplings, Series, SystemId, TodaError};

/// Schrödinger operator `-1/2 sum_v d_v^2 + potential + shift`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchrodingerOp {
    pub id: SystemId,
    pub vars: Vec<Variable>,
    pub potential: RatExp,
    pub shift: ScalarExpr,
    pub couplings: Couplings,
}

impl SchrodingerOp {
    /// Operator on a fresh set of variables (positional renaming).
    pub fn on_vars(&self, vars: &[Variable]) -> Result<SchrodingerOp, TodaError> {
        if vars.len() != self.vars.len() {
            return Err(TodaError::VariableCount { system: self.id.to_string(), expected: self.vars.len(), got: vars.len() });
        }
        let map = self.vars.iter().copied().zip(vars.iter().copied()).collect();
        Ok(SchrodingerOp { vars: vars.to_vec(), potential: self.potential.rename(&map)?, ..self.clone() })
    }

    pub fn with_shift(mut self, s: ScalarExpr) -> Self {
        self.shift = self.shift.add(&s);
        self
    }

    pub fn substitute(&self, map: &symexpr::Bindings) -> Result<SchrodingerOp, TodaError> {
        Ok(SchrodingerOp {
            potential: self.potential.substitute(map)?,
            shift: self.shift.substitute(map)?,
            couplings: self.couplings.map(|v| v.substitute(map))?,
            ..self.clone()
        })
    }

    /// Potential terms that are pure exponentials, with their exponents.
    pub fn exp_terms(&self) -> Vec<(LinearForm, ScalarExpr)> {
        self.potential
            .groups()
            .filter(|(d, _)| d.is_empty())
            .flat_map(|(_, p)| p.terms().map(|(l, c)| (l.clone(), c.clone())).collect::<Vec<_>>())
            .collect()
    }

    pub fn latex(&self) -> String {
        let kin: Vec<String> = self.vars.iter().map(|v| format!("\\partial_{{{}}}^2", v.latex())).collect();
        let mut s = format!("-\\tfrac12({}) + {}", kin.join("+"), self.potential.latex());
        if !self.shift.is_zero() {
            s.push_str(&format!(" + {}", self.shift.latex()));
        }
        s
    }
}

/// Builder for potentials on an ordered variable list, 1-based.
struct Pot<'a> {
    v: &'a [Variable],
    r: RatExp,
}

impl<'a> Pot<'a> {
    fn form(&self, terms: &[(u32, i64)]) -> LinearForm {
        LinearForm::from_terms(&terms.iter().map(|(i, c)| (self.v[*i as usize - 1], *c)).collect::<Vec<_>>())
    }

    fn exp(&mut self, c: ScalarExpr, terms: &[(u32, i64)]) {
        let l = self.form(terms);
        self.r = self.r.add(&RatExp::from_exppoly(ExpPoly::monomial(c, l)));
    }

    /// `c / (e^{-w/2} - e^{w/2})^2 = c e^{w} / (1 - e^{w})^2`, with `w = k v_i`.
    fn inverse_sinh2(&mut self, c: ScalarExpr, i: u32, k: i64) -> Result<(), SymError> {
        let l = self.form(&[(i, k)]);
        let f = RatExp::fraction(ExpPoly::monomial(c, l.clone()), &BinomBase::minus(l), 2)?;
        self.r = self.r.add(&f);
        Ok(())
    }

    /// `sum_{i=1}^{m-1} g_{i+off} e^{v_{i+1} - v_i}` over variables `from..m`.
    fn chain(&mut self, c: &Couplings, off: u32, from: u32, m: u32) -> Result<(), TodaError> {
        for i in from..m {
            self.exp(c.get(i + off)?, &[(i + 1, 1), (i, -1)]);
        }
        Ok(())
    }

    /// `-g/2 e^{v_1} + g^2/2 e^{2 v_1}`.
    fn bc_star_head(&mut self, g: ScalarExpr) {
        let half = ScalarExpr::from_ratio(1, 2);
        self.exp(g.mul(&half).neg(), &[(1, 1)]);
        self.exp(g.mul(&g).mul(&half), &[(1, 2)]);
    }
}

fn two() -> ScalarExpr {
    ScalarExpr::from_int(2)
}

/// Default variables `x_{m,1..m}`, or `z_{m,1..m}` for the families
/// usually written in `z`.
pub fn default_vars(id: &SystemId) -> Vec<Variable> {
    let m = id.nvars();
    let fam = match id.series {
        Series::C | Series::Cinf | Series::BCstar | Series::Istar | Series::IstarShifted | Series::I | Series::Iinf | Series::HatI => Family::Z,
        _ => Family::X,
    };
    Variable::layer_vec(fam, m, m)
}

/// Builds the quadratic Hamiltonian of `id` on its default variables.
pub fn build_hamiltonian(id: &SystemId, couplings: &Couplings, shift: Option<ScalarExpr>) -> Result<SchrodingerOp, TodaError> {
    build_hamiltonian_on(id, couplings, shift, &default_vars(id))
}

/// Builds the quadratic Hamiltonian of `id` on the given variables.
pub fn build_hamiltonian_on(
    id: &SystemId,
    couplings: &Couplings,
    shift: Option<ScalarExpr>,
    vars: &[Variable],
) -> Result<SchrodingerOp, TodaError> {
    id.validate()?;
    couplings.check(id)?;
    let m = id.nvars();
    if vars.len() != m as usize {
        return Err(TodaError::VariableCount { system: id.to_string(), expected: m as usize, got: vars.len() });
    }
    let n = id.rank;
    let c = couplings;
    let mut p = Pot { v: vars, r: RatExp::zero() };
    let mut sh = shift.unwrap_or_else(ScalarExpr::zero);
    let g = |i| c.get(i);
    match id.series {
        Series::Free => {}
        Series::A => p.chain(c, 0, 1, m)?,
        Series::GlAff => {
            p.chain(c, 0, 1, m)?;
            p.exp(g(m)?, &[(1, 1), (m, -1)]);
        }
        Series::A1aff => {
            p.exp(g(1)?, &[(1, 1), (m, -1)]);
            p.chain(c, 1, 1, m)?;
        }
        Series::B | Series::Binf => {
            p.exp(g(1)?, &[(1, 1)]);
            p.chain(c, 1, 1, m)?;
        }
        Series::C | Series::Cinf => {
            p.exp(two().mul(&g(1)?), &[(1, 2)]);
            p.chain(c, 1, 1, m)?;
        }
        Series::BCstar => {
            p.bc_star_head(g(1)?);
            p.chain(c, 1, 1, m)?;
        }
        Series::D | Series::Dinf => {
            if m >= 2 {
                p.exp(g(1)?.mul(&g(2)?), &[(1, 1), (2, 1)]);
            }
            p.chain(c, 1, 1, m)?;
        }
        Series::BC | Series::BCinf => {
            p.exp(g(1)?, &[(1, 1)]);
            p.exp(g(2)?, &[(1, 2)]);
            p.chain(c, 2, 1, m)?;
        }
        Series::I | Series::Istar | Series::Iinf => {
            let alpha = deformation_of(id, c);
            inozemtsev_head(&mut p, c, &alpha)?;
            if m >= 2 {
                let s2 = c.sigma(2)?;
                let g3s2 = g(3)?.mul(&s2);
                if id.printed && matches!(id.series, Series::I | Series::Iinf) {
                    p.exp(s2, &[(1, 1), (2, 1)]);
                } else {
                    p.exp(g3s2.clone(), &[(1, 1), (2, 1)]);
                }
                p.exp(g3s2, &[(2, 1), (1, -1)]);
            }
            p.chain(c, 2, 2, m)?;
        }
        Series::IstarShifted => {
            // -g1/2 (e^{-z} + s^2 e^{z} - g1) / (e^{-z} - s^2 e^{z})^2, cleared by e^{2z}
            let s2 = c.sigma(2)?;
            let s2sq = s2.mul(&s2);
            let g1 = g(1)?;
            let half = ScalarExpr::from_ratio(1, 2);
            let z = p.form(&[(1, 1)]);
            let num = ExpPoly::from_terms([
                (g1.mul(&half).neg(), z.clone()),
                (g1.mul(&half).mul(&s2sq).neg(), z.scale_int(3)),
                (g1.mul(&g1).mul(&half), z.scale_int(2)),
            ]);
            let base = BinomBase::new(s2sq.neg(), z.scale_int(2));
            p.r = p.r.add(&RatExp::fraction(num, &base, 2)?);
            if m >= 2 {
                p.exp(s2sq.mul(&g(3)?), &[(1, 1), (2, 1)]);
            }
            p.chain(c, 2, 1, m)?;
        }
        Series::A2even => {
            p.exp(g(1)?, &[(1, 1)]);
            p.chain(c, 1, 1, m)?;
            p.exp(two().mul(&g(n + 1)?).mul(&g(n + 2)?), &[(m, -2)]);
        }
        Series::BCprime => {
            p.bc_star_head(g(1)?);
            p.chain(c, 1, 1, m)?;
            p.exp(g(n + 1)?, &[(m, -1), (m - 1, -1)]);
        }
        Series::A2odd => {
            p.exp(two().mul(&g(1)?), &[(1, 2)]);
            p.chain(c, 1, 1, m)?;
            p.exp(g(n)?.mul(&g(n + 1)?), &[(m, -1), (m - 1, -1)]);
        }
        Series::A2oddDual => {
            p.exp(g(1)?.mul(&g(2)?), &[(1, 1), (2, 1)]);
            p.chain(c, 1, 1, m)?;
            p.exp(two().mul(&g(n + 1)?), &[(m, -2)]);
        }
        Series::B1aff => {
            p.exp(g(1)?, &[(1, 1)]);
            p.chain(c, 1, 1, m)?;
            p.exp(g(n)?.mul(&g(n + 1)?), &[(m, -1), (m - 1, -1)]);
        }
        Series::BCdprime => {
            p.bc_star_head(g(1)?);
            p.chain(c, 1, 1, m)?;
            p.exp(two().mul(&g(n + 1)?), &[(m, -2)]);
        }
        Series::C1aff => {
            p.exp(two().mul(&g(1)?), &[(1, 2)]);
            p.chain(c, 1, 1, m)?;
            p.exp(two().mul(&g(n + 1)?).mul(&g(n + 2)?), &[(m, -2)]);
        }
        Series::D1aff => {
            p.exp(g(1)?.mul(&g(2)?), &[(1, 1), (2, 1)]);
            p.chain(c, 1, 1, m)?;
            p.exp(g(n + 1)?, &[(m, -1), (m - 1, -1)]);
            if m == 2 && !id.printed {
                // rank two: the fourth root e_1 - e_2 of the affine diagram
                p.exp(g(1)?.mul(&g(3)?), &[(1, 1), (2, -1)]);
            }
        }
        Series::D2aff => {
            p.exp(g(1)?, &[(1, 1)]);
            p.chain(c, 1, 1, m)?;
            let last = if id.printed { g(n + 1)? } else { g(n + 1)?.mul(&g(n + 2)?) };
            p.exp(last, &[(m, -1)]);
        }
        Series::HatBCstar => {
            p.bc_star_head(g(1)?);
            p.chain(c, 1, 1, m)?;
            let gl = g(n + 1)?;
            let half = ScalarExpr::from_ratio(1, 2);
            p.exp(gl.mul(&half).neg(), &[(m, -1)]);
            p.exp(gl.mul(&gl).mul(&half), &[(m, -2)]);
        }
        Series::HatBC => {
            p.exp(g(1)?, &[(1, 1)]);
            p.exp(g(2)?, &[(1, 2)]);
            p.chain(c, 2, 1, m)?;
            p.exp(g(n + 2)?, &[(m, -2)]);
            let last = g(n + 3)?;
            p.exp(if id.printed { last.neg() } else { last }, &[(m, -1)]);
        }
        Series::HatI => {
            // m = n + 1 variables; right-end couplings g_{n+2} (via sigma), g_{n+3}
            let a = deformation_of(id, c);
            inozemtsev_head(&mut p, c, &a)?;
            let nn = m - 1;
            let s2 = c.sigma(2)?;
            let sr = c.sigma(nn + 2)?;
            if m == 2 {
                let k = s2.mul(&sr);
                for t in [[1, 1], [-1, 1], [1, -1], [-1, -1]] {
                    p.exp(k.clone(), &[(1, t[0]), (2, t[1])]);
                }
            } else {
                let g3s2 = g(3)?.mul(&s2);
                p.exp(g3s2.clone(), &[(1, 1), (2, 1)]);
                p.exp(g3s2, &[(2, 1), (1, -1)]);
                p.chain(c, 2, 2, m - 1)?;
                if id.printed {
                    p.exp(sr.clone(), &[(1, 1), (2, 1)]);
                    p.exp(sr, &[(2, 1), (1, -1)]);
                } else {
                    p.exp(sr.clone(), &[(m, 1), (m - 1, -1)]);
                    p.exp(sr, &[(m, -1), (m - 1, -1)]);
                }
            }
            let c2 = g(nn + 3)?.div(&two().mul(&c.sigma(nn + 2)?))?;
            let t3 = if id.printed {
                two().mul(&a.add(&c2).powi(2)?).sub(&two().mul(&a.sub(&c2)))
            } else {
                let d = a.sub(&c2);
                two().mul(&d.mul(&d)).sub(&two().mul(&d))
            };
            let t4 = two().mul(&a).sub(&ScalarExpr::one()).mul(&c2);
            p.inverse_sinh2(t3, m, 2)?;
            p.inverse_sinh2(t4, m, 1)?;
            sh = sh.add(&a.mul(&a).mul(&ScalarExpr::from_ratio(1, 2)));
        }
    }
    Ok(SchrodingerOp { id: *id, vars: vars.to_vec(), potential: p.r, shift: sh, couplings: couplings.clone() })
}

/// Boundary terms `g1~ / (e^{-z/2} - e^{z/2})^2 + g2~ / (e^{-z} - e^{z})^2`
/// at the first variable, for deformation `alpha`.
fn inozemtsev_head(p: &mut Pot<'_>, c: &Couplings, alpha: &ScalarExpr) -> Result<(), TodaError> {
    let cc = c.get(1)?.div(&two().mul(&c.sigma(2)?))?;
    let t1 = two().mul(alpha).add(&ScalarExpr::one()).mul(&cc).neg();
    let s = alpha.add(&cc);
    let t2 = two().mul(&s).add(&two().mul(&s.mul(&s)));
    p.inverse_sinh2(t1, 1, 1)?;
    p.inverse_sinh2(t2, 1, 2)?;
    Ok(())
}

/// Maps a semi-infinite system to its finite truncation.
pub fn truncate_infinite(id: &SystemId, n: u32) -> Result<SystemId, TodaError> {
    let fin = id.series.truncated().ok_or_else(|| TodaError::NotInfinite(id.to_string()))?;
    let out = SystemId { series: fin, rank: n, truncation: None, printed: id.printed && id.series == Series::Iinf };
    out.validate()?;
    Ok(out)
}
