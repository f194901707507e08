//! Wavefunctions on grids and finite-difference eigen-residuals.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use symexpr::{NumRatExp, Params};
use toda::SchrodingerOp;

use crate::integrate::{Integrator, Method};
use crate::NumericError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, step: f64) -> Self {
        Axis { lo, hi, step }
    }

    /// Centered axis with `2m + 1` points.
    pub fn around(c: f64, step: f64, m: usize) -> Self {
        Axis { lo: c - step * m as f64, hi: c + step * m as f64, step }
    }

    /// Parses `lo:hi:step`.
    pub fn parse(s: &str) -> Result<Axis, NumericError> {
        let p: Vec<f64> = s.split(':').map(|x| x.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|e| NumericError::Config(format!("grid {s}: {e}")))?;
        match p[..] {
            [lo, hi, step] if step > 0.0 && hi >= lo => Ok(Axis { lo, hi, step }),
            _ => Err(NumericError::Config(format!("grid must be lo:hi:step with step > 0, got {s}"))),
        }
    }

    pub fn len(&self) -> usize {
        ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn at(&self, i: usize) -> f64 {
        self.lo + self.step * i as f64
    }
}

/// Row-major grid (last axis fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub axes: Vec<Axis>,
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Self {
        Grid { axes }
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Axis::len).collect()
    }

    pub fn size(&self) -> usize {
        self.shape().iter().product()
    }

    pub fn index(&self, flat: usize) -> Vec<usize> {
        let shape = self.shape();
        let mut idx = vec![0; shape.len()];
        let mut r = flat;
        for d in (0..shape.len()).rev() {
            idx[d] = r % shape[d];
            r /= shape[d];
        }
        idx
    }

    pub fn flat(&self, idx: &[usize]) -> usize {
        self.shape().iter().zip(idx).fold(0, |acc, (n, i)| acc * n + i)
    }

    pub fn coords(&self, idx: &[usize]) -> Vec<f64> {
        self.axes.iter().zip(idx).map(|(a, i)| a.at(*i)).collect()
    }
}

/// Values of a wavefunction on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridValues {
    pub grid: Grid,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    pub err_estimates: Vec<f64>,
    pub method: Method,
}

impl GridValues {
    pub fn value(&self, flat: usize) -> Complex64 {
        Complex64::new(self.re[flat], self.im[flat])
    }
}

/// Evaluates `integrator` on every grid point. External coordinates are
/// real; the integrator's nodes are shared by all points.
pub fn tabulate(integrator: &Integrator, grid: &Grid) -> Result<GridValues, NumericError> {
    tabulate_with(integrator, grid, false)
}

/// Whether some interior point's stencil reaches `idx`: at most one
/// coordinate may lie in the two-point margin.
pub fn on_some_stencil(grid: &Grid, idx: &[usize]) -> bool {
    let shape = grid.shape();
    let margin = idx.iter().zip(&shape).filter(|(i, n)| **i < 2 || **i + 2 >= **n).count();
    margin <= 1
}

/// As [`tabulate`]; with `stencil_only`, points no residual stencil uses
/// are left as NaN (for expensive multi-dimensional grids).
pub fn tabulate_with(integrator: &Integrator, grid: &Grid, stencil_only: bool) -> Result<GridValues, NumericError> {
    if grid.axes.len() != integrator.n_external() {
        return Err(NumericError::Shape(format!("grid has {} axes, plan has {} external variables", grid.axes.len(), integrator.n_external())));
    }
    let mut out = GridValues { grid: grid.clone(), re: vec![], im: vec![], err_estimates: vec![], method: Method::Direct };
    // sequential over points: the integrator already parallelizes inside
    for f in 0..grid.size() {
        let idx = grid.index(f);
        if stencil_only && !on_some_stencil(grid, &idx) {
            out.re.push(f64::NAN);
            out.im.push(f64::NAN);
            out.err_estimates.push(f64::NAN);
            continue;
        }
        let p: Vec<Complex64> = grid.coords(&idx).into_iter().map(|x| Complex64::new(x, 0.0)).collect();
        let r = integrator.eval(&p)?;
        out.method = r.method;
        out.re.push(r.value.re);
        out.im.push(r.value.im);
        out.err_estimates.push(r.err_estimate);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    /// `max |H psi - E psi| / (|E| |psi| + max_i |d_i^2 psi|)` over interior points.
    pub residual: f64,
    pub worst_point: Vec<f64>,
    pub interior_points: usize,
}

/// Fourth-order stencil for the second derivative.
fn d2(f: [Complex64; 5], h: f64) -> Complex64 {
    (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h)
}

/// Relative residual of `H psi = E psi` on the interior of a grid, with
/// `H = -1/2 sum d^2 + V` (the operator's own scalar shift is not included;
/// eigenvalues are reported as total chain shifts).
pub fn eigen_residual(h: &SchrodingerOp, params: &Params, psi: &GridValues, eigenvalue: Complex64) -> Result<ResidualReport, NumericError> {
    let g = &psi.grid;
    if g.axes.len() != h.vars.len() {
        return Err(NumericError::Shape(format!("grid has {} axes, {} has {} variables", g.axes.len(), h.id, h.vars.len())));
    }
    let shape = g.shape();
    if shape.iter().any(|&n| n < 5) {
        return Err(NumericError::Grid(format!("need at least 5 points per axis, got {shape:?}")));
    }
    let v = NumRatExp::compile(&h.potential, params, &h.vars)?;
    let scale = (0..g.size()).map(|i| psi.value(i).norm()).filter(|v| v.is_finite()).fold(0.0, f64::max);
    let interior: Vec<usize> = (0..g.size()).filter(|&f| g.index(f).iter().zip(&shape).all(|(i, n)| *i >= 2 && *i + 2 < *n)).collect();
    let rows: Vec<Result<Option<(f64, usize)>, NumericError>> = interior
        .par_iter()
        .map(|&f| {
            let idx = g.index(f);
            let p = psi.value(f);
            if !p.is_finite() {
                return Ok(None);
            }
            if p.norm() <= 1e-12 * scale {
                return Err(NumericError::Grid(format!("wavefunction vanishes at {:?}", g.coords(&idx))));
            }
            let mut lap = Complex64::new(0.0, 0.0);
            let mut dmax: f64 = 0.0;
            for (d, ax) in g.axes.iter().enumerate() {
                let mut s = [Complex64::new(0.0, 0.0); 5];
                for (k, sk) in s.iter_mut().enumerate() {
                    let mut j = idx.clone();
                    j[d] = idx[d] + k - 2;
                    *sk = psi.value(g.flat(&j));
                }
                if s.iter().any(|z| !z.is_finite()) {
                    return Ok(None);
                }
                let dd = d2(s, ax.step);
                dmax = dmax.max(dd.norm());
                lap += dd;
            }
            let x: Vec<Complex64> = g.coords(&idx).into_iter().map(|c| Complex64::new(c, 0.0)).collect();
            let hp = -0.5 * lap + v.eval(&x) * p;
            let num = (hp - eigenvalue * p).norm();
            let rel = if num == 0.0 { 0.0 } else { num / (eigenvalue.norm() * p.norm() + dmax) };
            Ok(Some((rel, f)))
        })
        .collect();
    let mut worst = (0.0, interior.first().copied().unwrap_or(0));
    let mut used = 0;
    for r in rows {
        let Some(r) = r? else { continue };
        used += 1;
        if r.0 > worst.0 || r.0.is_nan() {
            worst = r;
        }
    }
    if used == 0 {
        return Err(NumericError::Grid("no interior point has a complete stencil".into()));
    }
    Ok(ResidualReport { residual: worst.0, worst_point: g.coords(&g.index(worst.1)), interior_points: used })
}
