//! Sparse multivariate polynomials over ℚ(ι) in the parameter symbols,
//! with lexicographic term order and a recursive primitive-PRS gcd.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::field::GaussRat;

/// A parameter symbol. The imaginary unit is not a symbol: it lives in the
/// coefficient field.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Sym {
    /// Coupling constant `g_i`.
    G(u32),
    /// `σ_i` with `σ_i² = g_i/2`.
    Sigma(u32),
    /// Spectral parameter `λ_k`.
    Lambda(u32),
    /// Deformation parameter `a`.
    A,
}

/// Kind tag for a parameter symbol (the imaginary unit included for completeness).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum ParamKind {
    Coupling,
    SqrtCoupling,
    Spectral,
    Deformation,
    ImaginaryUnit,
}

impl Sym {
    pub fn kind(&self) -> ParamKind {
        match self {
            Sym::G(_) => ParamKind::Coupling,
            Sym::Sigma(_) => ParamKind::SqrtCoupling,
            Sym::Lambda(_) => ParamKind::Spectral,
            Sym::A => ParamKind::Deformation,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Sym::G(i) => format!("g{i}"),
            Sym::Sigma(i) => format!("sigma{i}"),
            Sym::Lambda(i) => format!("lambda{i}"),
            Sym::A => "a".to_string(),
        }
    }

    pub fn latex(&self) -> String {
        match self {
            Sym::G(i) => format!("g_{{{i}}}"),
            Sym::Sigma(i) => format!("\\sigma_{{{i}}}"),
            Sym::Lambda(i) => format!("\\lambda_{{{i}}}"),
            Sym::A => "a".to_string(),
        }
    }

    /// Parses `g3`, `sigma2`, `lambda1`, `a`.
    pub fn parse(s: &str) -> Option<Sym> {
        if s == "a" {
            return Some(Sym::A);
        }
        for (prefix, ctor) in [
            ("sigma", Sym::Sigma as fn(u32) -> Sym),
            ("lambda", Sym::Lambda as fn(u32) -> Sym),
            ("g", Sym::G as fn(u32) -> Sym),
        ] {
            if let Some(rest) = s.strip_prefix(prefix) {
                return rest.parse().ok().map(ctor);
            }
        }
        None
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A power product of symbols, sorted by symbol, exponents positive.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Mono(pub Vec<(Sym, u32)>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn var(s: Sym, e: u32) -> Self {
        if e == 0 {
            Mono::one()
        } else {
            Mono(vec![(s, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self, s: Sym) -> u32 {
        self.0.iter().find(|(t, _)| *t == s).map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        merge(self, o, |a, b| a + b)
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(&self, o: &Mono) -> Option<Mono> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(s, e) in &self.0 {
            if j < o.0.len() && o.0[j].0 < s {
                return None;
            }
            if j < o.0.len() && o.0[j].0 == s {
                let f = o.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((s, e - f)),
                }
            } else {
                out.push((s, e));
            }
        }
        if j < o.0.len() {
            return None;
        }
        Some(Mono(out))
    }

    pub fn gcd(&self, o: &Mono) -> Mono {
        let mut out = Vec::new();
        for &(s, e) in &self.0 {
            let f = o.degree(s);
            if f > 0 {
                out.push((s, e.min(f)));
            }
        }
        Mono(out)
    }

    pub fn lcm(&self, o: &Mono) -> Mono {
        merge(self, o, |a, b| a.max(b))
    }

    /// Removes the symbol `s`, returning its exponent and the rest.
    pub fn split_off(&self, s: Sym) -> (u32, Mono) {
        let mut rest = Vec::with_capacity(self.0.len());
        let mut d = 0;
        for &(t, e) in &self.0 {
            if t == s {
                d = e;
            } else {
                rest.push((t, e));
            }
        }
        (d, Mono(rest))
    }

    pub fn is_even(&self) -> bool {
        self.0.iter().all(|(_, e)| e % 2 == 0)
    }

    pub fn half(&self) -> Mono {
        Mono(self.0.iter().map(|&(s, e)| (s, e / 2)).collect())
    }

    pub fn syms(&self) -> impl Iterator<Item = Sym> + '_ {
        self.0.iter().map(|(s, _)| *s)
    }
}

fn merge(a: &Mono, b: &Mono, f: impl Fn(u32, u32) -> u32) -> Mono {
    let mut out = Vec::with_capacity(a.0.len() + b.0.len());
    let (mut i, mut j) = (0, 0);
    while i < a.0.len() || j < b.0.len() {
        if j >= b.0.len() || (i < a.0.len() && a.0[i].0 < b.0[j].0) {
            out.push((a.0[i].0, f(a.0[i].1, 0)));
            i += 1;
        } else if i >= a.0.len() || b.0[j].0 < a.0[i].0 {
            out.push((b.0[j].0, f(0, b.0[j].1)));
            j += 1;
        } else {
            out.push((a.0[i].0, f(a.0[i].1, b.0[j].1)));
            i += 1;
            j += 1;
        }
    }
    out.retain(|(_, e)| *e > 0);
    Mono(out)
}

/// Lexicographic order, smaller symbols having higher priority.
impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), o.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(s, e)), Some(&(t, f))) => {
                    if s < t {
                        return Ordering::Greater;
                    }
                    if s > t {
                        return Ordering::Less;
                    }
                    if e != f {
                        return e.cmp(&f);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Poly(pub BTreeMap<Mono, GaussRat>);

impl Poly {
    pub fn zero() -> Self {
        Poly(BTreeMap::new())
    }

    pub fn constant(c: GaussRat) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(Mono::one(), c);
        }
        Poly(m)
    }

    pub fn one() -> Self {
        Self::constant(GaussRat::one())
    }

    pub fn term(c: GaussRat, m: Mono) -> Self {
        let mut p = BTreeMap::new();
        if !c.is_zero() {
            p.insert(m, c);
        }
        Poly(p)
    }

    pub fn sym(s: Sym) -> Self {
        Self::term(GaussRat::one(), Mono::var(s, 1))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0.get(&Mono::one()).is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<GaussRat> {
        match self.0.len() {
            0 => Some(GaussRat::zero()),
            1 => self.0.get(&Mono::one()).cloned(),
            _ => None,
        }
    }

    pub fn single_term(&self) -> Option<(&Mono, &GaussRat)> {
        if self.0.len() == 1 {
            self.0.iter().next()
        } else {
            None
        }
    }

    pub fn leading(&self) -> Option<(&Mono, &GaussRat)> {
        self.0.iter().next_back()
    }

    pub fn add_term(&mut self, m: Mono, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.0.get_mut(&m) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.0.remove(&m);
                }
            }
            None => {
                self.0.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let (mut big, small) = if self.0.len() >= o.0.len() { (self.clone(), o) } else { (o.clone(), self) };
        for (m, c) in &small.0 {
            big.add_term(m.clone(), c.clone());
        }
        big
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &o.0 {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussRat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|(m, d)| (m.clone(), d * c)).collect())
    }

    pub fn mul_mono(&self, m: &Mono) -> Poly {
        Poly(self.0.iter().map(|(n, c)| (n.mul(m), c.clone())).collect())
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn syms(&self) -> BTreeSet<Sym> {
        self.0.keys().flat_map(|m| m.syms()).collect()
    }

    pub fn degree(&self, s: Sym) -> u32 {
        self.0.keys().map(|m| m.degree(s)).max().unwrap_or(0)
    }

    /// Monomial dividing every term.
    pub fn mono_content(&self) -> Mono {
        let mut it = self.0.keys();
        match it.next() {
            None => Mono::one(),
            Some(first) => it.fold(first.clone(), |acc, m| acc.gcd(m)),
        }
    }

    pub fn div_mono(&self, m: &Mono) -> Option<Poly> {
        let mut out = BTreeMap::new();
        for (n, c) in &self.0 {
            out.insert(n.div(m)?, c.clone());
        }
        Some(Poly(out))
    }

    /// Coefficients with respect to `s`, indexed by degree.
    pub fn coeffs_in(&self, s: Sym) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.degree(s) as usize + 1];
        for (m, c) in &self.0 {
            let (d, rest) = m.split_off(s);
            out[d as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(s: Sym, cs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (d, c) in cs.iter().enumerate() {
            for (m, v) in &c.0 {
                out.add_term(m.mul(&Mono::var(s, d as u32)), v.clone());
            }
        }
        out
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (lm_d, lc_d) = d.leading()?;
        if let Some((m, c)) = d.single_term() {
            let inv = c.inv()?;
            return self.div_mono(m).map(|p| p.scale(&inv));
        }
        let inv = lc_d.inv()?;
        let mut q = Poly::zero();
        let mut r = self.clone();
        while let Some((lm_r, lc_r)) = r.leading() {
            let t = lm_r.div(lm_d)?;
            let c = lc_r * &inv;
            r = r.sub(&d.mul_mono(&t).scale(&c));
            q.add_term(t, c);
        }
        Some(q)
    }

    /// Scales so that the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        gcd(self, o)
    }
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Poly::one();
    }
    if let Some((m, _)) = a.single_term() {
        return Poly::term(GaussRat::one(), m.gcd(&b.mono_content()));
    }
    if let Some((m, _)) = b.single_term() {
        return Poly::term(GaussRat::one(), m.gcd(&a.mono_content()));
    }
    let sa = a.syms();
    let sb = b.syms();
    let x = *sa.union(&sb).next().expect("nonconstant");
    if !sa.contains(&x) {
        return gcd(a, &content(b, x));
    }
    if !sb.contains(&x) {
        return gcd(&content(a, x), b);
    }
    let ca = content(a, x);
    let cb = content(b, x);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");
    let c = gcd(&ca, &cb);
    let g = prs(pa, pb, x);
    c.mul(&g).monic()
}

fn content(p: &Poly, x: Sym) -> Poly {
    let mut g = Poly::zero();
    for c in p.coeffs_in(x) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.as_constant().is_some() {
            return Poly::one();
        }
    }
    g
}

fn primitive(p: &Poly, x: Sym) -> Poly {
    let c = content(p, x);
    p.exact_div(&c).expect("content divides")
}

fn prem(a: &Poly, b: &Poly, x: Sym) -> Poly {
    let db = b.degree(x);
    let lcb = b.coeffs_in(x).pop().expect("nonzero");
    let mut r = a.clone();
    while !r.is_zero() && r.degree(x) >= db {
        let dr = r.degree(x);
        let lcr = r.coeffs_in(x).pop().expect("nonzero");
        let shift = Mono::var(x, dr - db);
        r = r.mul(&lcb).sub(&b.mul(&lcr).mul_mono(&shift));
    }
    r
}

fn prs(mut a: Poly, mut b: Poly, x: Sym) -> Poly {
    if a.degree(x) < b.degree(x) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = prem(&a, &b, x);
        if r.is_zero() {
            return primitive(&b, x);
        }
        if r.degree(x) == 0 {
            return Poly::one();
        }
        a = b;
        b = primitive(&r, x);
    }
}

fn fmt_mono(m: &Mono) -> String {
    m.0.iter()
        .map(|(s, e)| if *e == 1 { s.name() } else { format!("{}^{}", s.name(), e) })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.0.iter().rev() {
            let neg = c.is_real() && c.re < num_rational::BigRational::from_integer(0.into());
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", fmt_mono(m))?;
            } else {
                write!(f, "{}*{}", mag, fmt_mono(m))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(i: u32) -> Poly {
        Poly::sym(Sym::G(i))
    }

    fn c(n: i64) -> Poly {
        Poly::constant(GaussRat::from_int(n))
    }

    #[test]
    fn lex_order_prefers_small_symbols() {
        let a = Mono::var(Sym::G(1), 1);
        let b = Mono::var(Sym::G(2), 5);
        assert!(a > b);
        assert!(Mono::var(Sym::G(1), 2) > a);
    }

    #[test]
    fn exact_division() {
        let p = g(1).add(&g(2)).mul(&g(1).sub(&g(3)));
        let q = p.exact_div(&g(1).add(&g(2))).unwrap();
        assert_eq!(q, g(1).sub(&g(3)));
        assert!(p.exact_div(&g(1).add(&c(1))).is_none());
    }

    #[test]
    fn multivariate_gcd() {
        let f = g(1).add(&g(2)).mul(&g(3).add(&c(2)));
        let h = g(1).add(&g(2)).mul(&g(1).sub(&g(3)));
        let d = f.gcd(&h);
        assert_eq!(d, g(1).add(&g(2)).monic());
        assert!(g(1).add(&c(1)).gcd(&g(1).sub(&c(1))).is_one());
    }

    #[test]
    fn gcd_with_monomials() {
        let m = Poly::term(GaussRat::from_int(3), Mono::var(Sym::Sigma(2), 3));
        let p = Poly::sym(Sym::Sigma(2)).pow(2).mul(&g(1).add(&c(1)));
        assert_eq!(m.gcd(&p), Poly::sym(Sym::Sigma(2)).pow(2));
    }

    #[test]
    fn parse_symbols() {
        assert_eq!(Sym::parse("g12"), Some(Sym::G(12)));
        assert_eq!(Sym::parse("sigma2"), Some(Sym::Sigma(2)));
        assert_eq!(Sym::parse("lambda1"), Some(Sym::Lambda(1)));
        assert_eq!(Sym::parse("a"), Some(Sym::A));
        assert_eq!(Sym::parse("q"), None);
    }
}
