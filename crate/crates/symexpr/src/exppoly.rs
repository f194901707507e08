//! Laurent exp-polynomials `Σ c_L e^{L}` with symbolic coefficients.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;

use crate::eval::Params;
use crate::linear::{LinearForm, Point, Variable};
use crate::poly::Sym;
use crate::scalar::ScalarExpr;
use crate::SymError;

/// A single term `coeff · e^{arg}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct ExpMonomial {
    pub coeff: ScalarExpr,
    pub arg: LinearForm,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct ExpPoly(BTreeMap<LinearForm, ScalarExpr>);

pub fn rat(r: Rational64) -> ScalarExpr {
    ScalarExpr::from_ratio(*r.numer(), *r.denom())
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly(BTreeMap::new())
    }

    pub fn constant(c: ScalarExpr) -> Self {
        Self::monomial(c, LinearForm::zero())
    }

    pub fn monomial(c: ScalarExpr, arg: LinearForm) -> Self {
        let mut p = Self::zero();
        p.add_term(arg, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (ScalarExpr, LinearForm)>) -> Self {
        let mut p = Self::zero();
        for (c, l) in terms {
            p.add_term(l, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LinearForm, &ScalarExpr)> {
        self.0.iter()
    }

    pub fn monomials(&self) -> Vec<ExpMonomial> {
        self.0.iter().map(|(l, c)| ExpMonomial { coeff: c.clone(), arg: l.clone() }).collect()
    }

    pub fn coeff(&self, l: &LinearForm) -> ScalarExpr {
        self.0.get(l).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, l: LinearForm, c: ScalarExpr) {
        if c.is_zero() {
            return;
        }
        match self.0.get_mut(&l) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.0.remove(&l);
                }
            }
            None => {
                self.0.insert(l, c);
            }
        }
    }

    pub fn add(&self, o: &ExpPoly) -> ExpPoly {
        let (mut big, small) = if self.len() >= o.len() { (self.clone(), o) } else { (o.clone(), self) };
        for (l, c) in &small.0 {
            big.add_term(l.clone(), c.clone());
        }
        big
    }

    pub fn neg(&self) -> ExpPoly {
        ExpPoly(self.0.iter().map(|(l, c)| (l.clone(), c.neg())).collect())
    }

    pub fn sub(&self, o: &ExpPoly) -> ExpPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &ExpPoly) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (l1, c1) in &self.0 {
            for (l2, c2) in &o.0 {
                out.add_term(l1.add(l2), c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &ScalarExpr) -> ExpPoly {
        if c.is_zero() {
            return ExpPoly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        ExpPoly(self.0.iter().map(|(l, d)| (l.clone(), d.mul(c))).filter(|(_, d)| !d.is_zero()).collect())
    }

    /// Multiplies by `e^{l}`.
    pub fn shift(&self, l: &LinearForm) -> ExpPoly {
        if l.is_zero() {
            return self.clone();
        }
        ExpPoly(self.0.iter().map(|(m, c)| (m.add(l), c.clone())).collect())
    }

    pub fn pow(&self, k: u32) -> ExpPoly {
        let mut out = ExpPoly::constant(ScalarExpr::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn deriv(&self, v: Variable) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (l, c) in &self.0 {
            let k = l.coeff(v);
            if k != Rational64::from_integer(0) {
                out.add_term(l.clone(), c.mul(&rat(k)));
            }
        }
        out
    }

    pub fn substitute(&self, map: &BTreeMap<Sym, ScalarExpr>) -> Result<ExpPoly, SymError> {
        let mut out = ExpPoly::zero();
        for (l, c) in &self.0 {
            out.add_term(l.clone(), c.substitute(map)?);
        }
        Ok(out)
    }

    pub fn rename(&self, map: &BTreeMap<Variable, Variable>) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (l, c) in &self.0 {
            out.add_term(l.rename(map), c.clone());
        }
        out
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Variable> {
        self.0.keys().flat_map(|l| l.vars()).collect()
    }

    pub fn syms(&self) -> std::collections::BTreeSet<Sym> {
        self.0.values().flat_map(|c| c.syms()).collect()
    }

    /// Keeps the terms satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&LinearForm, &ScalarExpr) -> bool) -> ExpPoly {
        ExpPoly(self.0.iter().filter(|(l, c)| keep(l, c)).map(|(l, c)| (l.clone(), c.clone())).collect())
    }

    pub fn map_args(&self, f: impl Fn(&LinearForm) -> LinearForm) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (l, c) in &self.0 {
            out.add_term(f(l), c.clone());
        }
        out
    }

    pub fn eval(&self, params: &Params, p: &Point) -> Result<Complex64, SymError> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (l, c) in &self.0 {
            acc += c.eval(params)? * l.eval(p)?.exp();
        }
        Ok(acc)
    }

    /// Largest coefficient-weighted term magnitude, for relative tolerances.
    pub fn eval_scale(&self, params: &Params, p: &Point) -> Result<f64, SymError> {
        let mut m: f64 = 0.0;
        for (l, c) in &self.0 {
            m = m.max((c.eval(params)? * l.eval(p)?.exp()).norm());
        }
        Ok(m)
    }

    pub fn latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (l, c) in self.0.iter() {
            let e = if l.is_zero() { String::new() } else { format!("e^{{{}}}", l.latex()) };
            let coef = if c.is_one() && !e.is_empty() {
                String::new()
            } else if c.is_compound() {
                format!("\\left({}\\right)", c.latex())
            } else {
                c.latex()
            };
            parts.push(format!("{coef}{e}"));
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl std::fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(l, c)| {
                let cs = if c.is_compound() { format!("({c})") } else { c.to_string() };
                if l.is_zero() {
                    cs
                } else {
                    format!("{cs}*exp({l})")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for ExpPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.monomials().serialize(s)
    }
}
