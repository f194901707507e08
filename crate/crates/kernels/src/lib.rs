//! Intertwining kernels between quadratic Toda Hamiltonians, and the
//! composite kernels (recursive eigenfunctions, Q-operators) built from them.
//!
//! A pair `src -> dst` with kernel `K(src vars; dst vars)` satisfies
//! `H_src K = H_dst K`, both operators acting on `K` in their own variables.

pub mod catalog;
pub mod pair;
pub mod plan;

pub use catalog::{build, build_kernel, readings, Elementary, Reading};
pub use pair::{inverse_pair, PairId, PairKind, Param};
pub use plan::{lambda_block, qop_plan, recursion_plan, CompositeKernel, Seed, QOP_SERIES};

use symexpr::SymError;
use toda::TodaError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KernelError {
    #[error("unknown pair {0}")]
    UnknownPair(String),
    #[error("{pair}: n below the minimum {min}")]
    OutOfRange { pair: String, min: u32 },
    #[error("{0} takes no spectral parameter")]
    UnexpectedParam(String),
    #[error("empty plan")]
    EmptyPlan,
    #[error("broken chain at link {link}: {left} does not match {right}")]
    BrokenChain { link: usize, left: String, right: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Toda(#[from] TodaError),
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// Every catalog pair for `n` in `ns` (where defined).
pub fn catalog_pairs(ns: impl IntoIterator<Item = u32> + Clone) -> Vec<PairId> {
    let mut out = Vec::new();
    for k in PairKind::ALL {
        for n in ns.clone() {
            let p = PairId::new(k, n);
            if p.validate().is_ok() {
                out.push(p);
            }
        }
    }
    out
}
