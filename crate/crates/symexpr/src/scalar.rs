//! Rational functions in the parameter symbols, kept in lowest terms with a
//! monic denominator so that structural equality is mathematical equality.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::eval::Params;
use crate::field::GaussRat;
use crate::poly::{Mono, Poly, Sym};
use crate::SymError;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ScalarExpr {
    num: Poly,
    den: Poly,
}

impl Default for ScalarExpr {
    fn default() -> Self {
        Self::zero()
    }
}

impl ScalarExpr {
    pub fn zero() -> Self {
        ScalarExpr { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn iota() -> Self {
        Self::constant(GaussRat::iota())
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(GaussRat::from_int(n))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::constant(GaussRat::from_ratio(p, q))
    }

    pub fn constant(c: GaussRat) -> Self {
        ScalarExpr { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn sym(s: Sym) -> Self {
        ScalarExpr { num: Poly::sym(s), den: Poly::one() }
    }

    pub fn g(i: u32) -> Self {
        Self::sym(Sym::G(i))
    }

    pub fn sigma(i: u32) -> Self {
        Self::sym(Sym::Sigma(i))
    }

    pub fn lambda(i: u32) -> Self {
        Self::sym(Sym::Lambda(i))
    }

    pub fn a() -> Self {
        Self::sym(Sym::A)
    }

    pub fn from_poly(p: Poly) -> Self {
        ScalarExpr { num: p, den: Poly::one() }
    }

    /// Builds `num/den` in lowest terms.
    pub fn ratio(num: Poly, den: Poly) -> Result<Self, SymError> {
        if den.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some((m, c)) = den.single_term() {
            let inv = c.inv().expect("nonzero denominator");
            let g = m.gcd(&num.mono_content());
            let num = num.div_mono(&g).expect("gcd divides").scale(&inv);
            let den = m.div(&g).expect("gcd divides");
            return ScalarExpr { num, den: Poly::term(GaussRat::one(), den) };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
        };
        let lc = den.leading().expect("nonzero").1.inv().expect("nonzero");
        ScalarExpr { num: num.scale(&lc), den: den.scale(&lc) }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<GaussRat> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// `c·m/n` with `m, n` power products.
    pub fn as_monomial(&self) -> Option<(GaussRat, Mono, Mono)> {
        let (m, c) = self.num.single_term()?;
        let (n, _) = self.den.single_term()?;
        Some((c.clone(), m.clone(), n.clone()))
    }

    /// Square root when `self` is a monomial with a positive rational square
    /// coefficient and even exponents.
    pub fn monomial_sqrt(&self) -> Option<ScalarExpr> {
        let (c, m, n) = self.as_monomial()?;
        if !m.is_even() || !n.is_even() {
            return None;
        }
        let r = c.rational_sqrt()?;
        Some(ScalarExpr {
            num: Poly::term(r, m.half()),
            den: Poly::term(GaussRat::one(), n.half()),
        })
    }

    pub fn add(&self, o: &ScalarExpr) -> ScalarExpr {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::normalize(self.num.add(&o.num), self.den.clone());
        }
        if let (Some((m1, _)), Some((m2, _))) = (self.den.single_term(), o.den.single_term()) {
            let l = m1.lcm(m2);
            let a = self.num.mul_mono(&l.div(m1).expect("lcm"));
            let b = o.num.mul_mono(&l.div(m2).expect("lcm"));
            return Self::normalize(a.add(&b), Poly::term(GaussRat::one(), l));
        }
        Self::normalize(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn neg(&self) -> ScalarExpr {
        ScalarExpr { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &ScalarExpr) -> ScalarExpr {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &ScalarExpr) -> ScalarExpr {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.is_one() {
            return o.clone();
        }
        if o.is_one() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return ScalarExpr { num: self.num.mul(&o.num), den: Poly::one() };
        }
        Self::normalize(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn scale(&self, c: &GaussRat) -> ScalarExpr {
        if c.is_zero() {
            return Self::zero();
        }
        ScalarExpr { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<ScalarExpr, SymError> {
        Self::ratio(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &ScalarExpr) -> Result<ScalarExpr, SymError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn powi(&self, e: i32) -> Result<ScalarExpr, SymError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        Ok(ScalarExpr { num: base.num.pow(e.unsigned_abs()), den: base.den.pow(e.unsigned_abs()) })
    }

    pub fn syms(&self) -> std::collections::BTreeSet<Sym> {
        let mut s = self.num.syms();
        s.extend(self.den.syms());
        s
    }

    /// Simultaneous substitution of symbols by expressions.
    pub fn substitute(&self, map: &BTreeMap<Sym, ScalarExpr>) -> Result<ScalarExpr, SymError> {
        if !self.syms().iter().any(|s| map.contains_key(s)) {
            return Ok(self.clone());
        }
        let n = subst_poly(&self.num, map)?;
        let d = subst_poly(&self.den, map)?;
        n.div(&d)
    }

    pub fn eval(&self, p: &Params) -> Result<Complex64, SymError> {
        let n = eval_poly(&self.num, p)?;
        let d = eval_poly(&self.den, p)?;
        Ok(n / d)
    }

    pub fn latex(&self) -> String {
        let n = latex_poly(&self.num);
        if self.den.is_one() {
            n
        } else {
            format!("\\frac{{{}}}{{{}}}", n, latex_poly(&self.den))
        }
    }

    /// Whether the printed form needs parentheses inside a product.
    pub fn is_compound(&self) -> bool {
        !self.den.is_one() || self.num.0.len() > 1
    }
}

fn subst_poly(p: &Poly, map: &BTreeMap<Sym, ScalarExpr>) -> Result<ScalarExpr, SymError> {
    let mut out = ScalarExpr::zero();
    let mut cache: BTreeMap<(Sym, u32), ScalarExpr> = BTreeMap::new();
    for (m, c) in &p.0 {
        let mut t = ScalarExpr::constant(c.clone());
        for &(s, e) in &m.0 {
            let f = match map.get(&s) {
                Some(v) => {
                    if let Some(f) = cache.get(&(s, e)) {
                        f.clone()
                    } else {
                        let f = v.powi(e as i32)?;
                        cache.insert((s, e), f.clone());
                        f
                    }
                }
                None => ScalarExpr::from_poly(Poly::term(GaussRat::one(), Mono::var(s, e))),
            };
            t = t.mul(&f);
        }
        out = out.add(&t);
    }
    Ok(out)
}

fn eval_poly(p: &Poly, params: &Params) -> Result<Complex64, SymError> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (m, c) in &p.0 {
        let mut t = c.to_c64();
        for &(s, e) in &m.0 {
            t *= params.get(s).ok_or(SymError::UnboundSymbol(s.name()))?.powi(e as i32);
        }
        acc += t;
    }
    Ok(acc)
}

fn latex_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (m, c)) in p.0.iter().rev().enumerate() {
        let neg = c.is_real() && c.re < num_rational::BigRational::from_integer(0.into());
        let mag = if neg { -c } else { c.clone() };
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let coef = latex_coef(&mag);
        let mono: Vec<String> = m
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { v.latex() } else { format!("{}^{{{}}}", v.latex(), e) })
            .collect();
        if m.is_one() {
            s.push_str(&coef);
        } else {
            if !mag.is_one() {
                s.push_str(&coef);
            }
            s.push_str(&mono.join(" "));
        }
    }
    s
}

fn latex_coef(c: &GaussRat) -> String {
    let r = |q: &num_rational::BigRational| {
        if q.denom() == &1.into() {
            q.numer().to_string()
        } else {
            format!("\\tfrac{{{}}}{{{}}}", q.numer(), q.denom())
        }
    };
    if c.is_real() {
        r(&c.re)
    } else if num_traits::Zero::is_zero(&c.re) {
        if num_traits::One::is_one(&c.im) {
            "\\iota ".into()
        } else {
            format!("{}\\iota ", r(&c.im))
        }
    } else {
        format!("({} + {}\\iota)", r(&c.re), r(&c.im))
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            let n = if self.num.0.len() > 1 { format!("({})", self.num) } else { self.num.to_string() };
            let d = if self.den.0.len() > 1 || self.den.single_term().is_some_and(|(m, _)| m.0.len() > 1) {
                format!("({})", self.den)
            } else {
                self.den.to_string()
            };
            write!(f, "{n}/{d}")
        }
    }
}

impl Serialize for ScalarExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl From<i64> for ScalarExpr {
    fn from(n: i64) -> Self {
        ScalarExpr::from_int(n)
    }
}

impl From<Sym> for ScalarExpr {
    fn from(s: Sym) -> Self {
        ScalarExpr::sym(s)
    }
}
