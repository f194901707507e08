//! Kernels in log-normal form:
//! `prefactor · exp(Σ c e^{L}) · exp(Σ p_v v) · Π (1 + c e^{L})^{p}`.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::binom::BinomBase;
use crate::eval::Params;
use crate::exppoly::{rat, ExpPoly};
use crate::linear::{LinearForm, Point, Variable};
use crate::poly::Sym;
use crate::ratexp::RatExp;
use crate::scalar::ScalarExpr;
use crate::SymError;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct KernelExpr {
    pub exp_arg: ExpPoly,
    pub plane_wave: BTreeMap<Variable, ScalarExpr>,
    pub binomials: BTreeMap<BinomBase, ScalarExpr>,
    pub prefactor: ScalarExpr,
}

impl Default for KernelExpr {
    fn default() -> Self {
        Self::one()
    }
}

impl KernelExpr {
    pub fn one() -> Self {
        KernelExpr {
            exp_arg: ExpPoly::zero(),
            plane_wave: BTreeMap::new(),
            binomials: BTreeMap::new(),
            prefactor: ScalarExpr::one(),
        }
    }

    /// Adds `c·e^{L}` to the exponent.
    pub fn exp_term(mut self, c: ScalarExpr, l: LinearForm) -> Self {
        self.exp_arg.add_term(l, c);
        self
    }

    /// Adds `c·L` to the plane-wave exponent.
    pub fn plane(mut self, c: &ScalarExpr, l: &LinearForm) -> Self {
        for (v, k) in l.iter() {
            let e = self.plane_wave.entry(*v).or_default();
            *e = e.add(&c.mul(&rat(*k)));
        }
        self.plane_wave.retain(|_, c| !c.is_zero());
        self
    }

    /// Multiplies by `(1 + c e^{L})^{p}`, split to normal form.
    pub fn binomial(mut self, scale: ScalarExpr, arg: LinearForm, p: ScalarExpr) -> Self {
        if scale.is_zero() || p.is_zero() {
            return self;
        }
        for b in BinomBase::new(scale, arg).split_fully() {
            let e = self.binomials.entry(b.clone()).or_default();
            *e = e.add(&p);
            if e.is_zero() {
                self.binomials.remove(&b);
            }
        }
        self
    }

    pub fn with_prefactor(mut self, c: ScalarExpr) -> Self {
        self.prefactor = self.prefactor.mul(&c);
        self
    }

    pub fn mul(&self, o: &KernelExpr) -> KernelExpr {
        let mut k = self.clone();
        k.exp_arg = k.exp_arg.add(&o.exp_arg);
        for (v, c) in &o.plane_wave {
            let e = k.plane_wave.entry(*v).or_default();
            *e = e.add(c);
        }
        k.plane_wave.retain(|_, c| !c.is_zero());
        for (b, p) in &o.binomials {
            k = k.binomial(b.scale.clone(), b.arg.clone(), p.clone());
        }
        k.prefactor = k.prefactor.mul(&o.prefactor);
        k
    }

    pub fn vars(&self) -> BTreeSet<Variable> {
        let mut s = self.exp_arg.vars();
        s.extend(self.plane_wave.keys().copied());
        for b in self.binomials.keys() {
            s.extend(b.arg.vars());
        }
        s
    }

    pub fn syms(&self) -> BTreeSet<Sym> {
        let mut s = self.exp_arg.syms();
        s.extend(self.plane_wave.values().flat_map(|c| c.syms()));
        for (b, p) in &self.binomials {
            s.extend(b.scale.syms());
            s.extend(p.syms());
        }
        s.extend(self.prefactor.syms());
        s
    }

    /// `∂_v log K`.
    pub fn dlog(&self, v: Variable) -> Result<RatExp, SymError> {
        let mut r = RatExp::from_exppoly(self.exp_arg.deriv(v));
        if let Some(c) = self.plane_wave.get(&v) {
            r = r.add(&RatExp::constant(c.clone()));
        }
        for (b, p) in &self.binomials {
            let lv = b.arg.coeff(v);
            if lv == num_rational::Rational64::from_integer(0) {
                continue;
            }
            let num = ExpPoly::monomial(p.mul(&b.scale).mul(&rat(lv)), b.arg.clone());
            r = r.add(&RatExp::fraction(num, b, 1)?);
        }
        Ok(r)
    }

    pub fn substitute(&self, map: &BTreeMap<Sym, ScalarExpr>) -> Result<KernelExpr, SymError> {
        let mut k = KernelExpr::one();
        k.exp_arg = self.exp_arg.substitute(map)?;
        for (v, c) in &self.plane_wave {
            let c = c.substitute(map)?;
            if !c.is_zero() {
                k.plane_wave.insert(*v, c);
            }
        }
        for (b, p) in &self.binomials {
            k = k.binomial(b.scale.substitute(map)?, b.arg.clone(), p.substitute(map)?);
        }
        k.prefactor = self.prefactor.substitute(map)?;
        Ok(k)
    }

    pub fn rename(&self, map: &BTreeMap<Variable, Variable>) -> KernelExpr {
        let mut k = KernelExpr::one();
        k.exp_arg = self.exp_arg.rename(map);
        for (v, c) in &self.plane_wave {
            k = k.plane(c, &LinearForm::var(*map.get(v).unwrap_or(v)));
        }
        for (b, p) in &self.binomials {
            k = k.binomial(b.scale.clone(), b.arg.rename(map), p.clone());
        }
        k.prefactor = self.prefactor.clone();
        k
    }

    /// Substitutes `v := v + log(factor)` in the exponential parts: every
    /// `e^{L}` gains `factor^{L(v)}`. The plane-wave part contributes only a
    /// constant multiple, which is dropped. Requires integral `L(v)`.
    pub fn shift_log(&self, v: Variable, factor: &ScalarExpr) -> Result<KernelExpr, SymError> {
        let scale = |l: &LinearForm| -> Result<ScalarExpr, SymError> {
            let k = l.coeff(v);
            if !k.is_integer() {
                return Err(SymError::NonIntegralShift(v.name()));
            }
            factor.powi(k.to_integer().to_i32().unwrap_or(0))
        };
        let mut k = KernelExpr::one();
        for (l, c) in self.exp_arg.terms() {
            k.exp_arg.add_term(l.clone(), c.mul(&scale(l)?));
        }
        k.plane_wave = self.plane_wave.clone();
        for (b, p) in &self.binomials {
            k = k.binomial(b.scale.mul(&scale(&b.arg)?), b.arg.clone(), p.clone());
        }
        k.prefactor = self.prefactor.clone();
        Ok(k)
    }

    /// Removes every exponential term, plane-wave entry and binomial that
    /// involves one of `vars`.
    pub fn drop_vars(&self, vars: &BTreeSet<Variable>) -> KernelExpr {
        let touches = |l: &LinearForm| l.vars().any(|v| vars.contains(&v));
        let mut k = self.clone();
        k.exp_arg = self.exp_arg.filter(|l, _| !touches(l));
        k.plane_wave.retain(|v, _| !vars.contains(v));
        k.binomials.retain(|b, _| !touches(&b.arg));
        k
    }

    /// Principal-branch value.
    pub fn eval(&self, params: &Params, p: &Point) -> Result<Complex64, SymError> {
        Ok(self.eval_log(params, p)?.exp())
    }

    /// Principal-branch logarithm of the value (up to `2πi` ambiguity of the prefactor).
    pub fn eval_log(&self, params: &Params, p: &Point) -> Result<Complex64, SymError> {
        let mut acc = self.exp_arg.eval(params, p)?;
        for (v, c) in &self.plane_wave {
            let x = p.get(v).ok_or_else(|| SymError::UnboundVariable(v.name()))?;
            acc += c.eval(params)? * x;
        }
        for (b, e) in &self.binomials {
            acc += e.eval(params)? * b.eval(params, p)?.ln();
        }
        acc += self.prefactor.eval(params)?.ln();
        Ok(acc)
    }

    pub fn latex(&self) -> String {
        let mut parts = Vec::new();
        if !self.prefactor.is_one() {
            parts.push(if self.prefactor.is_compound() {
                format!("\\left({}\\right)", self.prefactor.latex())
            } else {
                self.prefactor.latex()
            });
        }
        for (b, p) in &self.binomials {
            parts.push(format!("\\left({}\\right)^{{{}}}", b.latex(), p.latex()));
        }
        if !self.plane_wave.is_empty() {
            let terms: Vec<String> = self
                .plane_wave
                .iter()
                .map(|(v, c)| {
                    if c.is_one() {
                        v.latex()
                    } else if c.is_compound() {
                        format!("\\left({}\\right){}", c.latex(), v.latex())
                    } else {
                        format!("{}{}", c.latex(), v.latex())
                    }
                })
                .collect();
            parts.push(format!("e^{{{}}}", terms.join(" + ").replace("+ -", "- ")));
        }
        if !self.exp_arg.is_zero() {
            parts.push(format!("\\exp\\left({}\\right)", self.exp_arg.latex()));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }
}

impl std::fmt::Display for KernelExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if !self.prefactor.is_one() {
            parts.push(format!("({})", self.prefactor));
        }
        for (b, p) in &self.binomials {
            parts.push(format!("{b}^({p})"));
        }
        if !self.plane_wave.is_empty() {
            let t: Vec<String> = self.plane_wave.iter().map(|(v, c)| format!("({c})*{v}")).collect();
            parts.push(format!("exp({})", t.join(" + ")));
        }
        if !self.exp_arg.is_zero() {
            parts.push(format!("exp({})", self.exp_arg));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" * "))
        }
    }
}

#[derive(Serialize)]
struct BinomRepr<'a> {
    scale: &'a ScalarExpr,
    arg: &'a LinearForm,
    exponent: &'a ScalarExpr,
}

#[derive(Serialize)]
struct KernelRepr<'a> {
    exp_arg: &'a ExpPoly,
    plane_wave: BTreeMap<String, &'a ScalarExpr>,
    binomials: Vec<BinomRepr<'a>>,
    prefactor: &'a ScalarExpr,
}

impl Serialize for KernelExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        KernelRepr {
            exp_arg: &self.exp_arg,
            plane_wave: self.plane_wave.iter().map(|(v, c)| (v.name(), c)).collect(),
            binomials: self
                .binomials
                .iter()
                .map(|(b, p)| BinomRepr { scale: &b.scale, arg: &b.arg, exponent: p })
                .collect(),
            prefactor: &self.prefactor,
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dlog_of_exp_term() {
        let x = Variable::x(1, 1);
        let z = Variable::z(1, 1);
        let k = KernelExpr::one().exp_term(ScalarExpr::from_int(-1), LinearForm::from_terms(&[(x, 1), (z, -1)]));
        let d = k.dlog(x).unwrap();
        let expected = RatExp::from_exppoly(ExpPoly::monomial(
            ScalarExpr::from_int(-1),
            LinearForm::from_terms(&[(x, 1), (z, -1)]),
        ));
        assert!(d.sub(&expected).is_zero().unwrap());
    }

    #[test]
    fn dlog_of_binomial() {
        let z = Variable::z(1, 1);
        let p = ScalarExpr::a();
        let k = KernelExpr::one().binomial(ScalarExpr::from_int(-1), LinearForm::var(z), p.clone());
        let d = k.dlog(z).unwrap();
        let expected =
            RatExp::fraction(ExpPoly::monomial(p.neg(), LinearForm::var(z)), &BinomBase::minus(LinearForm::var(z)), 1)
                .unwrap();
        assert!(d.sub(&expected).is_zero().unwrap());
    }

    #[test]
    fn split_on_multiply() {
        let z = Variable::z(1, 1);
        let a = ScalarExpr::a();
        let p = ScalarExpr::lambda(1);
        let k1 = KernelExpr::one().binomial(ScalarExpr::from_int(-1), LinearForm::term(z, 2), a.clone());
        let k2 = KernelExpr::one().binomial(ScalarExpr::from_int(-1), LinearForm::var(z), p.clone());
        let k = k1.mul(&k2);
        assert_eq!(k.binomials.len(), 2);
        assert_eq!(k.binomials[&BinomBase::minus(LinearForm::var(z))], a.add(&p));
        assert_eq!(k.binomials[&BinomBase::plus(LinearForm::var(z))], a);
    }
}
