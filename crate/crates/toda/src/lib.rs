//! Toda systems: identifiers, coupling tables, root data and quadratic
//! Hamiltonians for the finite, affine and truncated semi-infinite chains.
//!
//! Hamiltonians act on the left, `H = -1/2 sum_i d_i^2 + V(x) + shift`, with
//! the potential stored as a [`symexpr::RatExp`]. Inozemtsev boundary terms
//! are written with integer exponents,
//! `1/(e^{-w/2} - e^{w/2})^2 = e^{w}/(1 - e^{w})^2`.

pub mod couplings;
pub mod hamiltonian;
pub mod roots;
pub mod series;

pub use couplings::{coupling_indices, deformation_of, sigma_elimination, Couplings};
pub use hamiltonian::{build_hamiltonian, build_hamiltonian_on, default_vars, truncate_infinite, SchrodingerOp};
pub use roots::{describe, dynkin_edges, list_systems, simple_roots, DynkinEdge, Root, SystemDescriptor};
pub use series::{Series, SystemId};

use symexpr::SymError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TodaError {
    #[error("unknown system {0}")]
    UnknownSystem(String),
    #[error("{system}: rank below the minimum {min}")]
    RankOutOfRange { system: String, min: u32 },
    #[error("coupling g{0} missing")]
    MissingCoupling(u32),
    #[error("coupling g{0} has no exact square root of g/2")]
    NonSquareCoupling(u32),
    #[error("{system}: expected couplings {expected:?}, got {got:?}")]
    CouplingMismatch { system: String, expected: Vec<u32>, got: Vec<u32> },
    #[error("{system}: expected {expected} variables, got {got}")]
    VariableCount { system: String, expected: usize, got: usize },
    #[error("{0} is not a semi-infinite series")]
    NotInfinite(String),
    #[error(transparent)]
    Sym(#[from] SymError),
}
