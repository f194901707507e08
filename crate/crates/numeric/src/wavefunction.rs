//! Eigenfunctions of open chains from their recursion plans, tabulated on a
//! grid, with a self-describing JSON file format.

use std::collections::BTreeMap;

use kernels::{recursion_plan, CompositeKernel, Seed};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use symexpr::{Params, Sym};
use toda::{Series, SchrodingerOp};

use crate::eigen::{eigen_residual, tabulate, tabulate_with, Grid, GridValues, ResidualReport};
use crate::integrate::{Budget, Contour, Integrator};
use crate::NumericError;

/// Parameter values: couplings by name (`g1`, `sigma2`, `a`) and spectral
/// parameters `lambda_1, lambda_2, ...` in order.
pub fn params_from(couplings: &BTreeMap<String, f64>, spectral: &[f64]) -> Result<Params, NumericError> {
    let mut p = Params::new();
    for (name, v) in couplings {
        let s = Sym::parse(name).ok_or_else(|| NumericError::Config(format!("unknown coupling {name}")))?;
        p = p.with(s, *v);
    }
    for (k, v) in spectral.iter().enumerate() {
        p = p.with(Sym::Lambda(k as u32 + 1), *v);
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionSpec {
    /// Series name as printed by the catalog (`B`, `C`, `D`, `BC`, `I`).
    pub system: String,
    pub n: u32,
    pub couplings: BTreeMap<String, f64>,
    #[serde(default)]
    pub spectral: Vec<f64>,
    #[serde(default)]
    pub contour: Contour,
    #[serde(default)]
    pub budget: Budget,
    pub grid: Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionFile {
    pub spec: WavefunctionSpec,
    pub plan: String,
    pub variables: Vec<String>,
    /// `[re, im]` of the summed chain shift.
    pub eigenvalue: [f64; 2],
    pub values: GridValues,
}

pub fn plan_for(system: &str, n: u32) -> Result<CompositeKernel, NumericError> {
    let series = Series::parse(system).ok_or_else(|| NumericError::Config(format!("unknown series {system}")))?;
    Ok(recursion_plan(series, n)?)
}

/// Seeds and recursion plans by name: `seed-c1`, ..., or `B:2`-style.
pub fn named_plan(name: &str) -> Result<CompositeKernel, NumericError> {
    let seed = match name {
        "seed-c1" => Some(Seed::C1),
        "seed-b1" => Some(Seed::B1),
        "seed-bc1" => Some(Seed::BC1),
        "seed-i1" => Some(Seed::I1),
        "seed-i1tobc0" => Some(Seed::I1ToBC0),
        _ => None,
    };
    if let Some(s) = seed {
        return Ok(s.plan()?);
    }
    let (sys, n) = name.split_once(':').ok_or_else(|| NumericError::Config(format!("unknown plan {name}")))?;
    plan_for(sys, n.parse().map_err(|_| NumericError::Config(format!("bad rank in {name}")))?)
}

/// The eigenvalue carried by `plan` at the given parameters.
pub fn eigenvalue_of(plan: &CompositeKernel, params: &Params) -> Result<Complex64, NumericError> {
    Ok(plan.claimed_shift.eval(params)?)
}

/// The operator the plan diagonalizes, in the plan's external variables.
pub fn source_operator(plan: &CompositeKernel) -> &SchrodingerOp {
    &plan.nodes[0].src
}

pub fn build_wavefunction(spec: &WavefunctionSpec) -> Result<WavefunctionFile, NumericError> {
    let plan = plan_for(&spec.system, spec.n)?;
    let params = params_from(&spec.couplings, &spec.spectral)?;
    let mut int = Integrator::new(&plan, &params, &spec.contour, &spec.budget)?;
    let mid: Vec<Complex64> = spec.grid.axes.iter().map(|a| Complex64::new(0.5 * (a.lo + a.hi), 0.0)).collect();
    int.prepare(&mid)?;
    let values = tabulate(&int, &spec.grid)?;
    let e = eigenvalue_of(&plan, &params)?;
    Ok(WavefunctionFile {
        spec: spec.clone(),
        plan: plan.label.clone(),
        variables: plan.external().iter().map(|v| v.name()).collect(),
        eigenvalue: [e.re, e.im],
        values,
    })
}

/// Eigen-residual of a tabulated wavefunction against its own system.
pub fn residual_of(file: &WavefunctionFile) -> Result<ResidualReport, NumericError> {
    let plan = plan_for(&file.spec.system, file.spec.n)?;
    let params = params_from(&file.spec.couplings, &file.spec.spectral)?;
    eigen_residual(source_operator(&plan), &params, &file.values, Complex64::new(file.eigenvalue[0], file.eigenvalue[1]))
}

/// Tabulates any plan on a grid with a frozen quadrature rule; see
/// [`tabulate_with`] for `stencil_only`.
pub fn tabulate_plan(plan: &CompositeKernel, params: &Params, contour: &Contour, budget: &Budget, grid: &Grid, stencil_only: bool) -> Result<GridValues, NumericError> {
    let mut int = Integrator::new(plan, params, contour, budget)?;
    let mid: Vec<Complex64> = grid.axes.iter().map(|a| Complex64::new(0.5 * (a.lo + a.hi), 0.0)).collect();
    int.prepare(&mid)?;
    tabulate_with(&int, grid, stencil_only)
}
