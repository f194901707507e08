//! Exact symbolic algebra for exponential kernels and Schrödinger-type
//! residuals.
//!
//! The coefficient field is the field of rational functions over ℚ(ι) in the
//! parameter symbols ([`Sym`]). On top of it sit exp-polynomials in chain
//! variables, binomial bases `1 + c e^{L}`, the residual class [`RatExp`] with
//! a decidable zero test, and kernels in log-normal form ([`KernelExpr`]).

pub mod binom;
pub mod eval;
pub mod exppoly;
pub mod field;
pub mod kernel;
pub mod linear;
pub mod poly;
pub mod ratexp;
pub mod scalar;

pub use binom::BinomBase;
pub use eval::{NumForm, NumKernel, NumRatExp, Params};
pub use exppoly::{ExpMonomial, ExpPoly};
pub use field::GaussRat;
pub use kernel::KernelExpr;
pub use linear::{Family, LinearForm, Point, Variable};
pub use poly::{Mono, ParamKind, Poly, Sym};
pub use ratexp::{RatExp, ZeroTest, MAX_BASES};
pub use scalar::ScalarExpr;

use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unbound symbol {0}")]
    UnboundSymbol(String),
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("pole at evaluation point")]
    Pole,
    #[error("too many distinct denominator bases ({0} > {MAX_BASES})")]
    TooManyBases(usize),
    #[error("shift of {0} needs integral exponents")]
    NonIntegralShift(String),
}

/// Symbol bindings for [`ScalarExpr::substitute`] and friends.
pub type Bindings = BTreeMap<Sym, ScalarExpr>;

/// Builds a binding map from pairs.
pub fn bindings(pairs: impl IntoIterator<Item = (Sym, ScalarExpr)>) -> Bindings {
    pairs.into_iter().collect()
}
