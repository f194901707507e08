//! Binomial bases `1 + c·e^{L}` and their normal forms.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::eval::Params;
use crate::exppoly::ExpPoly;
use crate::linear::{LinearForm, Point, Variable};
use crate::poly::Sym;
use crate::scalar::ScalarExpr;
use crate::SymError;

/// `1 + scale·e^{arg}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct BinomBase {
    pub scale: ScalarExpr,
    pub arg: LinearForm,
}

/// `coef · e^{shift} · Π factors`.
#[derive(Clone, Debug)]
pub struct Factored {
    pub coef: ScalarExpr,
    pub shift: LinearForm,
    pub factors: Vec<BinomBase>,
}

impl BinomBase {
    pub fn new(scale: ScalarExpr, arg: LinearForm) -> Self {
        BinomBase { scale, arg }
    }

    /// `1 − e^{L}`.
    pub fn minus(arg: LinearForm) -> Self {
        Self::new(ScalarExpr::from_int(-1), arg)
    }

    /// `1 + e^{L}`.
    pub fn plus(arg: LinearForm) -> Self {
        Self::new(ScalarExpr::one(), arg)
    }

    pub fn as_exppoly(&self) -> ExpPoly {
        let mut p = ExpPoly::constant(ScalarExpr::one());
        p.add_term(self.arg.clone(), self.scale.clone());
        p
    }

    /// `(1 − r e^{L/2})(1 + r e^{L/2})` when `−c = r²` is a monomial square
    /// and `L/2` is integral.
    pub fn split(&self) -> Option<(BinomBase, BinomBase)> {
        let r = self.scale.neg().monomial_sqrt()?;
        let h = self.arg.half_integral()?;
        Some((BinomBase::new(r.neg(), h.clone()), BinomBase::new(r, h)))
    }

    /// Splits to fixpoint.
    pub fn split_fully(&self) -> Vec<BinomBase> {
        match self.split() {
            None => vec![self.clone()],
            Some((a, b)) => {
                let mut v = a.split_fully();
                v.extend(b.split_fully());
                v
            }
        }
    }

    /// Canonical factorization for use in denominators: every factor has a
    /// positive leading coefficient in its argument and is fully split.
    pub fn factor(&self) -> Result<Factored, SymError> {
        if self.scale.is_zero() {
            return Ok(Factored { coef: ScalarExpr::one(), shift: LinearForm::zero(), factors: vec![] });
        }
        if self.arg.is_zero() {
            let c = ScalarExpr::one().add(&self.scale);
            if c.is_zero() {
                return Err(SymError::DivisionByZero);
            }
            return Ok(Factored { coef: c, shift: LinearForm::zero(), factors: vec![] });
        }
        let (coef, shift, base) = if self.arg.leading_sign() < 0 {
            (self.scale.clone(), self.arg.clone(), BinomBase::new(self.scale.inv()?, self.arg.neg()))
        } else {
            (ScalarExpr::one(), LinearForm::zero(), self.clone())
        };
        Ok(Factored { coef, shift, factors: base.split_fully() })
    }

    pub fn substitute(&self, map: &BTreeMap<Sym, ScalarExpr>) -> Result<BinomBase, SymError> {
        Ok(BinomBase::new(self.scale.substitute(map)?, self.arg.clone()))
    }

    pub fn rename(&self, map: &BTreeMap<Variable, Variable>) -> BinomBase {
        BinomBase::new(self.scale.clone(), self.arg.rename(map))
    }

    pub fn eval(&self, params: &Params, p: &Point) -> Result<Complex64, SymError> {
        Ok(1.0 + self.scale.eval(params)? * self.arg.eval(p)?.exp())
    }

    pub fn latex(&self) -> String {
        let e = format!("e^{{{}}}", self.arg.latex());
        if self.scale.is_one() {
            format!("1 + {e}")
        } else if self.scale.neg().is_one() {
            format!("1 - {e}")
        } else if self.scale.is_compound() {
            format!("1 + \\left({}\\right){e}", self.scale.latex())
        } else {
            format!("1 + {}{e}", self.scale.latex()).replace("+ -", "- ")
        }
    }
}

impl std::fmt::Display for BinomBase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.scale.is_compound() {
            write!(f, "(1 + ({})*exp({}))", self.scale, self.arg)
        } else {
            write!(f, "(1 + {}*exp({}))", self.scale, self.arg)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_difference_of_squares() {
        let z = Variable::z(1, 1);
        let b = BinomBase::minus(LinearForm::term(z, 2));
        let parts = b.split_fully();
        assert_eq!(parts, vec![BinomBase::minus(LinearForm::var(z)), BinomBase::plus(LinearForm::var(z))]);
        let b4 = BinomBase::minus(LinearForm::term(z, 4));
        assert_eq!(b4.split_fully().len(), 3);
    }

    #[test]
    fn orientation_pulls_out_monomial() {
        let z = Variable::z(1, 1);
        let b = BinomBase::new(ScalarExpr::g(1), LinearForm::term(z, -1));
        let f = b.factor().unwrap();
        assert_eq!(f.coef, ScalarExpr::g(1));
        assert_eq!(f.shift, LinearForm::term(z, -1));
        assert_eq!(f.factors[0].scale, ScalarExpr::g(1).inv().unwrap());
        assert_eq!(f.factors[0].arg, LinearForm::var(z));
    }
}
