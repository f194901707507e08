//! Ratios of exp-polynomials by products of binomial bases, with an exact
//! zero test.
//!
//! Values are stored as a sum of fractions grouped by denominator. Every
//! stored base is in canonical form (see [`BinomBase::factor`]), so bases can
//! be compared structurally. The zero test brings all groups over the least
//! common denominator and checks that every coefficient of the resulting
//! exp-polynomial vanishes; distinct exponentials are linearly independent
//! over the coefficient field, so this is a decision procedure.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use serde::Serialize;

use crate::binom::BinomBase;
use crate::eval::Params;
use crate::exppoly::{rat, ExpMonomial, ExpPoly};
use crate::linear::{LinearForm, Point, Variable};
use crate::poly::Sym;
use crate::scalar::ScalarExpr;
use crate::SymError;

/// Maximum number of distinct bases in a common denominator.
pub const MAX_BASES: usize = 64;

pub type Denom = BTreeMap<BinomBase, u32>;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct RatExp {
    groups: BTreeMap<Denom, ExpPoly>,
}

/// Outcome of the zero test.
#[derive(Clone, Debug, Serialize)]
pub struct ZeroTest {
    pub is_zero: bool,
    /// Smallest surviving monomial of the cleared numerator.
    pub witness: Option<ExpMonomial>,
    pub bases: usize,
    pub numerator_terms: usize,
    /// Common denominator of the exponent coefficients; variables are
    /// rescaled by this factor to reach an integer lattice.
    pub lattice: i64,
}

impl RatExp {
    pub fn zero() -> Self {
        RatExp { groups: BTreeMap::new() }
    }

    pub fn from_exppoly(p: ExpPoly) -> Self {
        let mut r = Self::zero();
        r.add_group(Denom::new(), p);
        r
    }

    pub fn constant(c: ScalarExpr) -> Self {
        Self::from_exppoly(ExpPoly::constant(c))
    }

    /// `num / base^k`, with the base brought to canonical form.
    pub fn fraction(num: ExpPoly, base: &BinomBase, k: u32) -> Result<Self, SymError> {
        let f = base.factor()?;
        let k_i = k as i32;
        let num = num.scale(&f.coef.powi(-k_i)?).shift(&f.shift.scale_int(-(k as i64)));
        let mut den = Denom::new();
        for b in f.factors {
            *den.entry(b).or_insert(0) += k;
        }
        let mut r = Self::zero();
        r.add_group(den, num);
        Ok(r)
    }

    fn add_group(&mut self, den: Denom, num: ExpPoly) {
        if num.is_zero() {
            return;
        }
        let den: Denom = den.into_iter().filter(|(_, k)| *k > 0).collect();
        match self.groups.get_mut(&den) {
            Some(v) => {
                *v = v.add(&num);
                if v.is_zero() {
                    self.groups.remove(&den);
                }
            }
            None => {
                self.groups.insert(den, num);
            }
        }
    }

    pub fn groups(&self) -> impl Iterator<Item = (&Denom, &ExpPoly)> {
        self.groups.iter()
    }

    /// Structurally empty (a sufficient, not necessary, condition for zero).
    pub fn is_trivially_zero(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn add(&self, o: &RatExp) -> RatExp {
        let mut out = self.clone();
        for (d, n) in &o.groups {
            out.add_group(d.clone(), n.clone());
        }
        out
    }

    pub fn neg(&self) -> RatExp {
        RatExp { groups: self.groups.iter().map(|(d, n)| (d.clone(), n.neg())).collect() }
    }

    pub fn sub(&self, o: &RatExp) -> RatExp {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatExp) -> RatExp {
        let mut out = RatExp::zero();
        for (d1, n1) in &self.groups {
            for (d2, n2) in &o.groups {
                let mut d = d1.clone();
                for (b, k) in d2 {
                    *d.entry(b.clone()).or_insert(0) += k;
                }
                out.add_group(d, n1.mul(n2));
            }
        }
        out
    }

    pub fn scale(&self, c: &ScalarExpr) -> RatExp {
        let mut out = RatExp::zero();
        for (d, n) in &self.groups {
            out.add_group(d.clone(), n.scale(c));
        }
        out
    }

    pub fn mul_exppoly(&self, p: &ExpPoly) -> RatExp {
        let mut out = RatExp::zero();
        for (d, n) in &self.groups {
            out.add_group(d.clone(), n.mul(p));
        }
        out
    }

    pub fn deriv(&self, v: Variable) -> RatExp {
        let mut out = RatExp::zero();
        for (d, n) in &self.groups {
            out.add_group(d.clone(), n.deriv(v));
            for (b, k) in d {
                let lv = b.arg.coeff(v);
                if lv == num_rational::Rational64::from_integer(0) {
                    continue;
                }
                let c = b.scale.mul(&rat(lv)).mul(&ScalarExpr::from_int(-(*k as i64)));
                let mut d2 = d.clone();
                *d2.get_mut(b).expect("present") += 1;
                out.add_group(d2, n.mul(&ExpPoly::monomial(c, b.arg.clone())));
            }
        }
        out
    }

    pub fn bases(&self) -> BTreeSet<BinomBase> {
        self.groups.keys().flat_map(|d| d.keys().cloned()).collect()
    }

    pub fn vars(&self) -> BTreeSet<Variable> {
        let mut s: BTreeSet<Variable> = self.groups.values().flat_map(|n| n.vars()).collect();
        for b in self.bases() {
            s.extend(b.arg.vars());
        }
        s
    }

    pub fn syms(&self) -> BTreeSet<Sym> {
        let mut s: BTreeSet<Sym> = self.groups.values().flat_map(|n| n.syms()).collect();
        for b in self.bases() {
            s.extend(b.scale.syms());
        }
        s
    }

    /// Least common denominator and the numerator over it.
    pub fn combine(&self) -> Result<(Denom, ExpPoly), SymError> {
        let mut lcd = Denom::new();
        for d in self.groups.keys() {
            for (b, k) in d {
                let e = lcd.entry(b.clone()).or_insert(0);
                *e = (*e).max(*k);
            }
        }
        if lcd.len() > MAX_BASES {
            return Err(SymError::TooManyBases(lcd.len()));
        }
        let mut powers: BTreeMap<(BinomBase, u32), ExpPoly> = BTreeMap::new();
        let mut num = ExpPoly::zero();
        for (d, n) in &self.groups {
            let mut t = n.clone();
            for (b, kmax) in &lcd {
                let k = kmax - d.get(b).copied().unwrap_or(0);
                if k == 0 {
                    continue;
                }
                let p = powers.entry((b.clone(), k)).or_insert_with(|| b.as_exppoly().pow(k));
                t = t.mul(p);
            }
            num = num.add(&t);
        }
        Ok((lcd, num))
    }

    pub fn zero_test(&self) -> Result<ZeroTest, SymError> {
        let (lcd, num) = self.combine()?;
        let mut lattice = 1i64;
        for l in num.terms().map(|(l, _)| l).chain(lcd.keys().map(|b| &b.arg)) {
            lattice = num_integer::lcm(lattice, l.lattice_denominator());
        }
        let witness = num.monomials().into_iter().next();
        Ok(ZeroTest {
            is_zero: num.is_zero(),
            witness,
            bases: lcd.len(),
            numerator_terms: num.len(),
            lattice,
        })
    }

    pub fn is_zero(&self) -> Result<bool, SymError> {
        Ok(self.zero_test()?.is_zero)
    }

    pub fn substitute(&self, map: &BTreeMap<Sym, ScalarExpr>) -> Result<RatExp, SymError> {
        let mut out = RatExp::zero();
        for (d, n) in &self.groups {
            let mut t = RatExp::from_exppoly(n.substitute(map)?);
            for (b, k) in d {
                t = t.mul(&RatExp::fraction(ExpPoly::constant(ScalarExpr::one()), &b.substitute(map)?, *k)?);
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    pub fn rename(&self, map: &BTreeMap<Variable, Variable>) -> Result<RatExp, SymError> {
        let mut out = RatExp::zero();
        for (d, n) in &self.groups {
            let mut t = RatExp::from_exppoly(n.rename(map));
            for (b, k) in d {
                t = t.mul(&RatExp::fraction(ExpPoly::constant(ScalarExpr::one()), &b.rename(map), *k)?);
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    pub fn eval(&self, params: &Params, p: &Point) -> Result<Complex64, SymError> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (d, n) in &self.groups {
            let mut den = Complex64::new(1.0, 0.0);
            for (b, k) in d {
                den *= b.eval(params, p)?.powi(*k as i32);
            }
            if den.norm() == 0.0 {
                return Err(SymError::Pole);
            }
            acc += n.eval(params, p)? / den;
        }
        Ok(acc)
    }

    /// Largest magnitude among the individual terms at a point.
    pub fn eval_scale(&self, params: &Params, p: &Point) -> Result<f64, SymError> {
        let mut m: f64 = 0.0;
        for (d, n) in &self.groups {
            let mut den = Complex64::new(1.0, 0.0);
            for (b, k) in d {
                den *= b.eval(params, p)?.powi(*k as i32);
            }
            m = m.max(n.eval_scale(params, p)? / den.norm());
        }
        Ok(m)
    }

    pub fn latex(&self) -> String {
        if self.groups.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .groups
            .iter()
            .map(|(d, n)| {
                if d.is_empty() {
                    n.latex()
                } else {
                    let den: Vec<String> = d
                        .iter()
                        .map(|(b, k)| if *k == 1 { format!("({})", b.latex()) } else { format!("({})^{{{}}}", b.latex(), k) })
                        .collect();
                    format!("\\frac{{{}}}{{{}}}", n.latex(), den.join(""))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl std::fmt::Display for RatExp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.groups.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .groups
            .iter()
            .map(|(d, n)| {
                if d.is_empty() {
                    n.to_string()
                } else {
                    let den: Vec<String> =
                        d.iter().map(|(b, k)| if *k == 1 { b.to_string() } else { format!("{b}^{k}") }).collect();
                    format!("({})/({})", n, den.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize)]
struct GroupRepr<'a> {
    numerator: &'a ExpPoly,
    denominator: Vec<(&'a BinomBase, u32)>,
}

impl Serialize for RatExp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<GroupRepr> = self
            .groups
            .iter()
            .map(|(d, n)| GroupRepr { numerator: n, denominator: d.iter().map(|(b, k)| (b, *k)).collect() })
            .collect();
        v.serialize(s)
    }
}

/// Convenience: the linear form of a single variable.
pub fn lf(v: Variable) -> LinearForm {
    LinearForm::var(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Variable {
        Variable::z(1, 1)
    }

    fn e(c: i64, k: i64) -> ExpPoly {
        ExpPoly::monomial(ScalarExpr::from_int(c), LinearForm::term(z(), k))
    }

    #[test]
    fn identical_fractions_cancel() {
        let a = RatExp::fraction(e(1, 1), &BinomBase::minus(lf(z())), 1).unwrap();
        assert!(a.sub(&a).is_zero().unwrap());
    }

    #[test]
    fn factorization_identity() {
        let a = RatExp::fraction(e(1, 2), &BinomBase::minus(LinearForm::term(z(), 2)), 1).unwrap();
        let b = RatExp::fraction(e(1, 2), &BinomBase::minus(lf(z())), 1)
            .unwrap()
            .mul(&RatExp::fraction(ExpPoly::constant(ScalarExpr::one()), &BinomBase::plus(lf(z())), 1).unwrap());
        assert!(a.sub(&b).is_zero().unwrap());
    }

    #[test]
    fn partial_fraction_identity() {
        let a = RatExp::fraction(e(1, 1), &BinomBase::minus(lf(z())), 1).unwrap();
        let b = RatExp::fraction(e(1, 1), &BinomBase::plus(lf(z())), 1).unwrap();
        // e^z/(1-e^z) + e^z/(1+e^z) = 2e^z/(1-e^{2z}), not 2e^{2z}/(1-e^{2z})
        let good = RatExp::fraction(e(2, 1), &BinomBase::minus(LinearForm::term(z(), 2)), 1).unwrap();
        let bad = RatExp::fraction(e(2, 2), &BinomBase::minus(LinearForm::term(z(), 2)), 1).unwrap();
        assert!(a.add(&b).sub(&good).is_zero().unwrap());
        assert!(!a.add(&b).sub(&bad).is_zero().unwrap());
    }

    #[test]
    fn negative_orientation_is_equivalent() {
        // 1/(1 - e^{-z}) = -e^{z}/(1 - e^{z})
        let a = RatExp::fraction(ExpPoly::constant(ScalarExpr::one()), &BinomBase::minus(LinearForm::term(z(), -1)), 1).unwrap();
        let b = RatExp::fraction(e(-1, 1), &BinomBase::minus(lf(z())), 1).unwrap();
        assert!(a.sub(&b).is_zero().unwrap());
    }

    #[test]
    fn derivative_of_fraction() {
        // d/dz [1/(1 - e^z)] = e^z/(1 - e^z)^2
        let a = RatExp::fraction(ExpPoly::constant(ScalarExpr::one()), &BinomBase::minus(lf(z())), 1).unwrap();
        let b = RatExp::fraction(e(1, 1), &BinomBase::minus(lf(z())), 2).unwrap();
        assert!(a.deriv(z()).sub(&b).is_zero().unwrap());
    }

    #[test]
    fn witness_is_smallest_monomial() {
        let r = RatExp::from_exppoly(e(3, 2).add(&e(-1, 1)));
        let t = r.zero_test().unwrap();
        assert!(!t.is_zero);
        let w = t.witness.unwrap();
        assert_eq!(w.arg, lf(z()));
        assert_eq!(w.coeff, ScalarExpr::from_int(-1));
    }
}
