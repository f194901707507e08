//! Numerics for Toda eigenfunctions: iterated integrals of composite
//! kernels, finite-difference eigen-residuals, coupling limits, and a `K_0`
//! oracle.

pub mod bessel;
pub mod degenerate;
pub mod eigen;
pub mod integrate;
pub mod qmc;
pub mod quad;
pub mod wavefunction;

pub use bessel::bessel_k0;
pub use degenerate::{degeneration_check, DegenerationReport, Limit, DEFAULT_EPSILONS};
pub use eigen::{eigen_residual, on_some_stencil, tabulate, tabulate_with, Axis, Grid, GridValues, ResidualReport};
pub use integrate::{integrate, Budget, Contour, Integrator, Method, QuadResult};
pub use wavefunction::{build_wavefunction, eigenvalue_of, named_plan, source_operator, params_from, plan_for, residual_of, tabulate_plan, WavefunctionFile, WavefunctionSpec};

use kernels::KernelError;
use symexpr::SymError;
use toda::TodaError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("integration dimension {0} exceeds the cap of 8")]
    Dimension(usize),
    #[error("contour: {0}")]
    Contour(String),
    #[error("grid: {0}")]
    Grid(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Toda(#[from] TodaError),
    #[error(transparent)]
    Sym(#[from] SymError),
}
