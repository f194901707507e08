//! Numeric parameter bindings and compiled evaluators for hot loops.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::exppoly::ExpPoly;
use crate::kernel::KernelExpr;
use crate::linear::{LinearForm, Variable};
use crate::poly::Sym;
use crate::ratexp::RatExp;
use crate::SymError;

/// Numeric values of parameter symbols. An unbound `σ_i` falls back to
/// `√(g_i/2)` and an unbound `g_i` to `2σ_i²`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params(BTreeMap<Sym, Complex64>);

impl Params {
    pub fn new() -> Self {
        Params(BTreeMap::new())
    }

    pub fn with(mut self, s: Sym, v: f64) -> Self {
        self.0.insert(s, Complex64::new(v, 0.0));
        self
    }

    pub fn with_c(mut self, s: Sym, v: Complex64) -> Self {
        self.0.insert(s, v);
        self
    }

    pub fn set(&mut self, s: Sym, v: Complex64) {
        self.0.insert(s, v);
    }

    pub fn remove(&mut self, s: Sym) {
        self.0.remove(&s);
    }

    pub fn get(&self, s: Sym) -> Option<Complex64> {
        if let Some(v) = self.0.get(&s) {
            return Some(*v);
        }
        match s {
            Sym::Sigma(i) => self.0.get(&Sym::G(i)).map(|g| (g / 2.0).sqrt()),
            Sym::G(i) => self.0.get(&Sym::Sigma(i)).map(|s| 2.0 * s * s),
            _ => None,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Sym, &Complex64)> {
        self.0.iter()
    }
}

/// Sparse linear form over a fixed variable ordering.
#[derive(Clone, Debug)]
pub struct NumForm(Vec<(usize, f64)>);

impl NumForm {
    pub fn compile(l: &LinearForm, index: &BTreeMap<Variable, usize>) -> Result<Self, SymError> {
        let mut out = Vec::new();
        for (v, c) in l.iter() {
            let i = *index.get(v).ok_or_else(|| SymError::UnboundVariable(v.name()))?;
            out.push((i, c.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(NumForm(out))
    }

    #[inline]
    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(i, c) in &self.0 {
            acc += x[i] * c;
        }
        acc
    }
}

fn index_of(vars: &[Variable]) -> BTreeMap<Variable, usize> {
    vars.iter().enumerate().map(|(i, v)| (*v, i)).collect()
}

fn compile_exppoly(
    p: &ExpPoly,
    params: &Params,
    index: &BTreeMap<Variable, usize>,
) -> Result<Vec<(Complex64, NumForm)>, SymError> {
    p.terms().map(|(l, c)| Ok((c.eval(params)?, NumForm::compile(l, index)?))).collect()
}

#[inline]
fn eval_terms(t: &[(Complex64, NumForm)], x: &[Complex64]) -> Complex64 {
    t.iter().map(|(c, l)| c * l.eval(x).exp()).sum()
}

/// A kernel with parameters bound, evaluated at positional variables.
#[derive(Clone, Debug)]
pub struct NumKernel {
    exp_terms: Vec<(Complex64, NumForm)>,
    plane: Vec<(usize, Complex64)>,
    bins: Vec<(Complex64, NumForm, Complex64)>,
    log_prefactor: Complex64,
}

impl NumKernel {
    pub fn compile(k: &KernelExpr, params: &Params, vars: &[Variable]) -> Result<Self, SymError> {
        let index = index_of(vars);
        let exp_terms = compile_exppoly(&k.exp_arg, params, &index)?;
        let mut plane = Vec::new();
        for (v, c) in &k.plane_wave {
            let i = *index.get(v).ok_or_else(|| SymError::UnboundVariable(v.name()))?;
            plane.push((i, c.eval(params)?));
        }
        let mut bins = Vec::new();
        for (b, p) in &k.binomials {
            bins.push((b.scale.eval(params)?, NumForm::compile(&b.arg, &index)?, p.eval(params)?));
        }
        Ok(NumKernel { exp_terms, plane, bins, log_prefactor: k.prefactor.eval(params)?.ln() })
    }

    /// Principal-branch logarithm.
    #[inline]
    pub fn log_eval(&self, x: &[Complex64]) -> Complex64 {
        let mut acc = eval_terms(&self.exp_terms, x) + self.log_prefactor;
        for &(i, c) in &self.plane {
            acc += c * x[i];
        }
        for (c, l, p) in &self.bins {
            acc += p * (1.0 + c * l.eval(x).exp()).ln();
        }
        acc
    }

    #[inline]
    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        self.log_eval(x).exp()
    }

    /// Smallest `|1 + c e^{L}|` over the binomial bases at `x`.
    pub fn min_base_modulus(&self, x: &[Complex64]) -> f64 {
        self.bins.iter().map(|(c, l, _)| (1.0 + c * l.eval(x).exp()).norm()).fold(f64::INFINITY, f64::min)
    }
}

/// Numerator terms `c e^L`.
type NumTerms = Vec<(Complex64, NumForm)>;
/// Denominator factors `(1 + c e^L)^k`.
type NumBases = Vec<(Complex64, NumForm, i32)>;

/// A [`RatExp`] with parameters bound.
#[derive(Clone, Debug)]
pub struct NumRatExp {
    groups: Vec<(NumTerms, NumBases)>,
}

impl NumRatExp {
    pub fn compile(r: &RatExp, params: &Params, vars: &[Variable]) -> Result<Self, SymError> {
        let index = index_of(vars);
        let mut groups = Vec::new();
        for (d, n) in r.groups() {
            let num = compile_exppoly(n, params, &index)?;
            let mut den = Vec::new();
            for (b, k) in d {
                den.push((b.scale.eval(params)?, NumForm::compile(&b.arg, &index)?, *k as i32));
            }
            groups.push((num, den));
        }
        Ok(NumRatExp { groups })
    }

    #[inline]
    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (num, den) in &self.groups {
            let mut d = Complex64::new(1.0, 0.0);
            for (c, l, k) in den {
                d *= (1.0 + c * l.eval(x).exp()).powi(*k);
            }
            acc += eval_terms(num, x) / d;
        }
        acc
    }
}
