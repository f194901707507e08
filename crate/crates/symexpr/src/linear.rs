//! Chain variables and exact rational linear forms in them.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::SymError;

/// Variable family tag.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Family {
    X,
    Z,
    U,
    Y,
}

impl Family {
    pub fn letter(&self) -> char {
        match self {
            Family::X => 'x',
            Family::Z => 'z',
            Family::U => 'u',
            Family::Y => 'y',
        }
    }

    pub fn from_letter(c: char) -> Option<Family> {
        match c {
            'x' => Some(Family::X),
            'z' => Some(Family::Z),
            'u' => Some(Family::U),
            'y' => Some(Family::Y),
            _ => None,
        }
    }
}

/// `family_{layer,index}`, e.g. `x_{2,1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Variable {
    pub family: Family,
    pub layer: u32,
    pub index: u32,
}

impl Variable {
    pub fn new(family: Family, layer: u32, index: u32) -> Self {
        Variable { family, layer, index }
    }

    pub fn x(layer: u32, index: u32) -> Self {
        Self::new(Family::X, layer, index)
    }

    pub fn z(layer: u32, index: u32) -> Self {
        Self::new(Family::Z, layer, index)
    }

    pub fn u(layer: u32, index: u32) -> Self {
        Self::new(Family::U, layer, index)
    }

    pub fn y(layer: u32, index: u32) -> Self {
        Self::new(Family::Y, layer, index)
    }

    /// Layer vector `(v_{k,1}, …, v_{k,k})`, or of length `len` if given.
    pub fn layer_vec(family: Family, layer: u32, len: u32) -> Vec<Variable> {
        (1..=len).map(|i| Self::new(family, layer, i)).collect()
    }

    pub fn name(&self) -> String {
        format!("{}{}_{}", self.family.letter(), self.layer, self.index)
    }

    pub fn latex(&self) -> String {
        format!("{}_{{{},{}}}", self.family.letter(), self.layer, self.index)
    }

    /// Parses the `name()` form, e.g. `z2_1`.
    pub fn parse(s: &str) -> Option<Variable> {
        let mut chars = s.chars();
        let family = Family::from_letter(chars.next()?)?;
        let (layer, index) = chars.as_str().split_once('_')?;
        Some(Variable::new(family, layer.parse().ok()?, index.parse().ok()?))
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Serialize for Variable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

/// Numeric values of variables.
pub type Point = BTreeMap<Variable, Complex64>;

/// `Σ c_v v` with exact rational coefficients and no constant term.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct LinearForm(BTreeMap<Variable, Rational64>);

impl LinearForm {
    pub fn zero() -> Self {
        LinearForm(BTreeMap::new())
    }

    pub fn var(v: Variable) -> Self {
        Self::term(v, 1)
    }

    pub fn term(v: Variable, c: i64) -> Self {
        Self::zero().plus(v, Rational64::from_integer(c))
    }

    /// Builds `Σ c_i v_i` from integer coefficients.
    pub fn from_terms(terms: &[(Variable, i64)]) -> Self {
        let mut out = Self::zero();
        for &(v, c) in terms {
            out = out.plus(v, Rational64::from_integer(c));
        }
        out
    }

    pub fn plus(mut self, v: Variable, c: Rational64) -> Self {
        let e = self.0.entry(v).or_insert_with(Rational64::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&v);
        }
        self
    }

    pub fn coeff(&self, v: Variable) -> Rational64 {
        self.0.get(&v).copied().unwrap_or_else(Rational64::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &Rational64)> {
        self.0.iter()
    }

    pub fn vars(&self) -> impl Iterator<Item = Variable> + '_ {
        self.0.keys().copied()
    }

    pub fn add(&self, o: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        for (v, c) in &o.0 {
            out = out.plus(*v, *c);
        }
        out
    }

    pub fn neg(&self) -> LinearForm {
        LinearForm(self.0.iter().map(|(v, c)| (*v, -c)).collect())
    }

    pub fn sub(&self, o: &LinearForm) -> LinearForm {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: Rational64) -> LinearForm {
        if k.is_zero() {
            return Self::zero();
        }
        LinearForm(self.0.iter().map(|(v, c)| (*v, c * k)).collect())
    }

    pub fn scale_int(&self, k: i64) -> LinearForm {
        self.scale(Rational64::from_integer(k))
    }

    /// Sign of the first nonzero coefficient in variable order (0 for the zero form).
    pub fn leading_sign(&self) -> i32 {
        match self.0.values().next() {
            None => 0,
            Some(c) if c.is_positive() => 1,
            Some(_) => -1,
        }
    }

    /// `L/2` when its coefficients are integers.
    pub fn half_integral(&self) -> Option<LinearForm> {
        let h = self.scale(Rational64::new(1, 2));
        h.0.values().all(|c| c.is_integer()).then_some(h)
    }

    /// Least common multiple of the coefficient denominators.
    pub fn lattice_denominator(&self) -> i64 {
        self.0.values().fold(1i64, |acc, c| acc.lcm(c.denom()))
    }

    pub fn is_integral(&self) -> bool {
        self.0.values().all(|c| c.is_integer())
    }

    pub fn rename(&self, map: &BTreeMap<Variable, Variable>) -> LinearForm {
        let mut out = Self::zero();
        for (v, c) in &self.0 {
            out = out.plus(*map.get(v).unwrap_or(v), *c);
        }
        out
    }

    /// Replaces `v` by the linear form `by`.
    pub fn substitute_var(&self, v: Variable, by: &LinearForm) -> LinearForm {
        let c = self.coeff(v);
        if c.is_zero() {
            return self.clone();
        }
        let mut rest = self.clone();
        rest.0.remove(&v);
        rest.add(&by.scale(c))
    }

    pub fn eval(&self, p: &Point) -> Result<Complex64, SymError> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (v, c) in &self.0 {
            let x = p.get(v).ok_or_else(|| SymError::UnboundVariable(v.name()))?;
            acc += x * c.to_f64().unwrap_or(f64::NAN);
        }
        Ok(acc)
    }

    pub fn latex(&self) -> String {
        self.render(|v| v.latex(), true)
    }

    fn render(&self, name: impl Fn(&Variable) -> String, latex: bool) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (v, c)) in self.0.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                if mag.is_integer() {
                    s.push_str(&format!("{}", mag.numer()));
                } else if latex {
                    s.push_str(&format!("\\tfrac{{{}}}{{{}}}", mag.numer(), mag.denom()));
                } else {
                    s.push_str(&format!("{}/{}", mag.numer(), mag.denom()));
                }
                if !latex {
                    s.push('*');
                }
            }
            s.push_str(&name(v));
        }
        s
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(|v| v.name(), false))
    }
}

impl Serialize for LinearForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let x = Variable::x(1, 1);
        let z = Variable::z(2, 1);
        let l = LinearForm::from_terms(&[(x, 1), (z, -2)]);
        assert_eq!(l.to_string(), "x1_1 - 2*z2_1");
        assert!(l.add(&l.neg()).is_zero());
        assert_eq!(l.leading_sign(), 1);
        assert_eq!(l.neg().leading_sign(), -1);
        assert!(l.half_integral().is_none());
        assert_eq!(l.scale_int(2).half_integral(), Some(l.clone()));
    }

    #[test]
    fn lattice() {
        let z = Variable::z(1, 1);
        let l = LinearForm::zero().plus(z, Rational64::new(1, 2)).plus(Variable::x(1, 1), Rational64::new(1, 3));
        assert_eq!(l.lattice_denominator(), 6);
    }

    #[test]
    fn variable_names_roundtrip() {
        let v = Variable::u(3, 2);
        assert_eq!(Variable::parse(&v.name()), Some(v));
    }
}
