//! Iterated integrals of composite kernels.
//!
//! Dimension `<= 3`: tensor double-exponential rule, refined by halving the
//! step until two levels agree. Dimension `4..=8`: Owen-scrambled Sobol
//! points pushed through a logistic map, with independent scrambles as
//! replicates for the error estimate. Both rules use nodes that do not
//! depend on the external point, so values on a grid vary smoothly with it
//! and finite differences of the results are meaningful.

use std::collections::BTreeMap;

use kernels::CompositeKernel;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use symexpr::{NumKernel, Params, Variable};

use crate::qmc::{Sobol, MAX_DIM};
use crate::quad::DeRule;
use crate::NumericError;

/// Integration contour: variable `v` runs over `c_v + t + i delta_v`,
/// `|t| <= window`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub window: f64,
    /// Imaginary offset for variables that appear in a branch factor.
    pub branch_offset: f64,
    /// Explicit per-variable offsets, overriding `branch_offset`.
    #[serde(default)]
    pub offsets: BTreeMap<String, f64>,
    /// Real centres of the variables (defaults to 0).
    #[serde(default)]
    pub centers: BTreeMap<String, f64>,
    /// Scale of the logistic map used by the QMC rule.
    #[serde(default = "default_qmc_scale")]
    pub qmc_scale: f64,
}

fn default_qmc_scale() -> f64 {
    1.0
}

impl Default for Contour {
    fn default() -> Self {
        Contour { window: 30.0, branch_offset: 0.35, offsets: BTreeMap::new(), centers: BTreeMap::new(), qmc_scale: default_qmc_scale() }
    }
}

impl Contour {
    pub fn validate(&self) -> Result<(), NumericError> {
        if !(self.window > 0.0) {
            return Err(NumericError::Config(format!("contour window must be positive, got {}", self.window)));
        }
        if !(self.qmc_scale > 0.0) {
            return Err(NumericError::Config(format!("qmc scale must be positive, got {}", self.qmc_scale)));
        }
        Ok(())
    }

    /// Imaginary offset of each integrated variable of `plan`.
    pub fn offsets_for(&self, plan: &CompositeKernel) -> Vec<f64> {
        let k = plan.integrand();
        let branchy: Vec<Variable> = k.binomials.keys().flat_map(|b| b.arg.vars().collect::<Vec<_>>()).collect();
        plan.integrated()
            .iter()
            .map(|v| match self.offsets.get(&v.name()) {
                Some(d) => *d,
                None if branchy.contains(v) => self.branch_offset,
                None => 0.0,
            })
            .collect()
    }

    pub fn centers_for(&self, plan: &CompositeKernel) -> Vec<f64> {
        plan.integrated().iter().map(|v| self.centers.get(&v.name()).copied().unwrap_or(0.0)).collect()
    }

    /// Same contour with every imaginary offset negated.
    pub fn mirrored(&self) -> Contour {
        Contour {
            branch_offset: -self.branch_offset,
            offsets: self.offsets.iter().map(|(k, v)| (k.clone(), -v)).collect(),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub rel_tol: f64,
    /// Finest double-exponential level (`h = 2^{-max_depth}`).
    pub max_depth: u32,
    pub qmc_samples: u64,
    pub seed: u64,
    /// Independent scrambles used for the QMC error estimate.
    pub replicates: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { rel_tol: 1e-12, max_depth: 7, qmc_samples: 1 << 20, seed: 20_240_601, replicates: 16 }
    }
}

impl Budget {
    pub fn validate(&self) -> Result<(), NumericError> {
        if !(self.rel_tol > 0.0) {
            return Err(NumericError::Config(format!("relTol must be positive, got {}", self.rel_tol)));
        }
        if self.max_depth == 0 || self.max_depth > 12 {
            return Err(NumericError::Config(format!("maxDepth must lie in 1..=12, got {}", self.max_depth)));
        }
        if self.replicates < 2 || self.qmc_samples < self.replicates as u64 {
            return Err(NumericError::Config("qmc needs at least two replicates and one sample per replicate".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Direct,
    AdaptiveNested,
    Qmc,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: Complex64,
    pub err_estimate: f64,
    pub method: Method,
    pub evals: u64,
    pub seed: u64,
    /// False when the budget ran out before the tolerance was met.
    pub converged: bool,
}

/// A plan with parameters bound and nodes laid out, reusable across
/// external points.
pub struct Integrator {
    kernel: NumKernel,
    n_ext: usize,
    dim: usize,
    offsets: Vec<f64>,
    centers: Vec<f64>,
    contour: Contour,
    budget: Budget,
    /// Which centres the contour fixed explicitly.
    pinned: Vec<bool>,
    /// Double-exponential level fixed by [`Integrator::prepare`].
    level: Option<u32>,
}

const MIN_LEVEL: u32 = 3;
const CHUNK: u64 = 4096;
const PILOT: u64 = 1 << 14;

impl Integrator {
    pub fn new(plan: &CompositeKernel, params: &Params, contour: &Contour, budget: &Budget) -> Result<Self, NumericError> {
        contour.validate()?;
        budget.validate()?;
        let dim = plan.dim();
        if dim > MAX_DIM {
            return Err(NumericError::Dimension(dim));
        }
        let ext = plan.external();
        let mut vars = ext.clone();
        vars.extend(plan.integrated());
        let kernel = NumKernel::compile(&plan.integrand(), params, &vars)?;
        Ok(Integrator {
            kernel,
            n_ext: ext.len(),
            dim,
            offsets: contour.offsets_for(plan),
            centers: contour.centers_for(plan),
            pinned: plan.integrated().iter().map(|v| contour.centers.contains_key(&v.name())).collect(),
            contour: contour.clone(),
            budget: budget.clone(),
            level: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_external(&self) -> usize {
        self.n_ext
    }

    fn point(&self, ext: &[Complex64], t: &[f64]) -> Vec<Complex64> {
        let mut x = Vec::with_capacity(self.n_ext + self.dim);
        x.extend_from_slice(ext);
        for i in 0..self.dim {
            x.push(Complex64::new(self.centers[i] + t[i], self.offsets[i]));
        }
        x
    }

    fn f(&self, x: &[Complex64]) -> Complex64 {
        let l = self.kernel.log_eval(x);
        if l.re < -745.0 {
            Complex64::new(0.0, 0.0)
        } else {
            l.exp()
        }
    }

    /// Coarse scan of the contour: fails if the integrand is not small at
    /// the window edge, or if a branch factor comes close to its zero.
    pub fn preflight(&self, ext: &[Complex64]) -> Result<(), NumericError> {
        if self.dim == 0 {
            return Ok(());
        }
        let w = self.contour.window;
        let per = if self.dim <= 5 { vec![-w, -0.5 * w, -1.0, 0.0, 1.0, 0.5 * w, w] } else { vec![-w, 0.0, w] };
        let total = per.len().pow(self.dim as u32);
        let mut peak: f64 = 0.0;
        let mut edge: f64 = 0.0;
        let mut base = f64::INFINITY;
        let mut t = vec![0.0; self.dim];
        for mut idx in 0..total {
            let mut on_edge = false;
            for ti in t.iter_mut() {
                *ti = per[idx % per.len()];
                on_edge |= ti.abs() == w;
                idx /= per.len();
            }
            let x = self.point(ext, &t);
            let v = self.f(&x).norm();
            if !v.is_finite() {
                return Err(NumericError::Contour(format!("integrand not finite at t = {t:?}")));
            }
            base = base.min(self.kernel.min_base_modulus(&x));
            peak = peak.max(v);
            if on_edge {
                edge = edge.max(v);
            }
        }
        if edge > 1e-12 * peak.max(f64::MIN_POSITIVE) {
            return Err(NumericError::Contour(format!("integrand of size {edge:e} at the window edge (peak {peak:e})")));
        }
        if base < 1e-10 {
            return Err(NumericError::Contour(format!("branch factor vanishes on the contour (|base| = {base:e})")));
        }
        Ok(())
    }

    fn de_sum(&self, ext: &[Complex64], level: u32) -> (Complex64, f64, u64) {
        let rules: Vec<DeRule> = (0..self.dim).map(|_| DeRule::new(0.0, 1.0, self.contour.window, level)).collect();
        let outer = rules[0].len();
        let parts: Vec<(Complex64, f64, u64)> = (0..outer)
            .into_par_iter()
            .map(|i| {
                let mut t = vec![0.0; self.dim];
                t[0] = rules[0].nodes[i];
                let w0 = rules[0].weights[i];
                let mut acc = (Complex64::new(0.0, 0.0), 0.0, 0u64);
                self.de_inner(ext, &rules, 1, &mut t, w0, &mut acc);
                acc
            })
            .collect();
        parts.into_iter().fold((Complex64::new(0.0, 0.0), 0.0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2))
    }

    fn de_inner(&self, ext: &[Complex64], rules: &[DeRule], d: usize, t: &mut [f64], w: f64, acc: &mut (Complex64, f64, u64)) {
        if d == self.dim {
            let v = self.f(&self.point(ext, t)) * w;
            acc.0 += v;
            acc.1 += v.norm();
            acc.2 += 1;
            return;
        }
        for (x, wx) in rules[d].nodes.iter().zip(&rules[d].weights) {
            t[d] = *x;
            self.de_inner(ext, rules, d + 1, t, w * wx, acc);
        }
    }

    fn adaptive(&self, ext: &[Complex64]) -> QuadResult {
        let mut evals = 0;
        if let Some(l) = self.level {
            let (v, abs, n) = self.de_sum(ext, l);
            let (prev, _, m) = self.de_sum(ext, l - 1);
            return QuadResult {
                value: v,
                err_estimate: (v - prev).norm().max(64.0 * f64::EPSILON * abs),
                method: Method::AdaptiveNested,
                evals: n + m,
                seed: 0,
                converged: true,
            };
        }
        let (mut prev, _, n) = self.de_sum(ext, MIN_LEVEL - 1);
        evals += n;
        let mut out = None;
        for level in MIN_LEVEL..=self.budget.max_depth {
            let (v, abs, n) = self.de_sum(ext, level);
            evals += n;
            let err = (v - prev).norm().max(64.0 * f64::EPSILON * abs);
            let done = err <= self.budget.rel_tol * v.norm().max(f64::MIN_POSITIVE) || (v - prev).norm() <= 64.0 * f64::EPSILON * abs;
            out = Some(QuadResult { value: v, err_estimate: err, method: Method::AdaptiveNested, evals, seed: 0, converged: done });
            if done {
                break;
            }
            prev = v;
        }
        out.expect("at least one level")
    }

    /// Fixes the rule from a representative external point, so that a grid
    /// of values comes from one quadrature rule: the double-exponential
    /// level at which `ext` converges, or for QMC the centres of the
    /// logistic map (the `|f|`-weighted means from a pilot run, for centres
    /// the contour leaves free). Returns the level (0 for QMC).
    pub fn prepare(&mut self, ext: &[Complex64]) -> Result<u32, NumericError> {
        if self.dim == 0 {
            return Ok(0);
        }
        self.preflight(ext)?;
        if self.dim > 3 {
            self.center_from_pilot(ext);
            return Ok(0);
        }
        let mut level = MIN_LEVEL;
        let mut prev = self.de_sum(ext, level - 1).0;
        while level <= self.budget.max_depth {
            let (v, abs, _) = self.de_sum(ext, level);
            if (v - prev).norm() <= (self.budget.rel_tol * v.norm()).max(64.0 * f64::EPSILON * abs) {
                break;
            }
            prev = v;
            level += 1;
        }
        let level = level.min(self.budget.max_depth);
        self.level = Some(level.max(MIN_LEVEL));
        Ok(level)
    }

    fn center_from_pilot(&mut self, ext: &[Complex64]) {
        let sobol = Sobol::new(self.dim);
        let sc = self.contour.qmc_scale;
        let mut u = vec![0.0; self.dim];
        let mut t = vec![0.0; self.dim];
        let mut mass = 0.0;
        let mut first = vec![0.0; self.dim];
        for i in 0..PILOT {
            sobol.point(i as u32, self.budget.seed ^ 0x5eed, &mut u);
            let mut jac = 1.0;
            for d in 0..self.dim {
                t[d] = sc * (u[d] / (1.0 - u[d])).ln();
                jac *= sc / (u[d] * (1.0 - u[d]));
            }
            let w = self.f(&self.point(ext, &t)).norm() * jac;
            if w.is_finite() {
                mass += w;
                for d in 0..self.dim {
                    first[d] += w * (self.centers[d] + t[d]);
                }
            }
        }
        if mass > 0.0 {
            for d in 0..self.dim {
                if !self.pinned[d] {
                    self.centers[d] = first[d] / mass;
                }
            }
        }
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    fn qmc(&self, ext: &[Complex64]) -> QuadResult {
        let sobol = Sobol::new(self.dim);
        let reps = self.budget.replicates as u64;
        let per = self.budget.qmc_samples / reps;
        let w = self.contour.window;
        let sc = self.contour.qmc_scale;
        let mut means = Vec::with_capacity(reps as usize);
        for r in 0..reps {
            let seed = self.budget.seed.wrapping_add(r.wrapping_mul(0x632b_e59b_d9b4_e019));
            let chunks: Vec<Complex64> = (0..per.div_ceil(CHUNK))
                .into_par_iter()
                .map(|c| {
                    let mut u = vec![0.0; self.dim];
                    let mut t = vec![0.0; self.dim];
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in c * CHUNK..((c + 1) * CHUNK).min(per) {
                        sobol.point(i as u32, seed, &mut u);
                        let mut jac = 1.0;
                        let mut inside = true;
                        for d in 0..self.dim {
                            t[d] = sc * (u[d] / (1.0 - u[d])).ln();
                            jac *= sc / (u[d] * (1.0 - u[d]));
                            inside &= t[d].abs() <= w;
                        }
                        if inside {
                            acc += self.f(&self.point(ext, &t)) * jac;
                        }
                    }
                    acc
                })
                .collect();
            means.push(chunks.into_iter().sum::<Complex64>() / per as f64);
        }
        let mean = means.iter().sum::<Complex64>() / reps as f64;
        let var = means.iter().map(|m| (m - mean).norm_sqr()).sum::<f64>() / (reps - 1) as f64;
        QuadResult {
            value: mean,
            err_estimate: (var / reps as f64).sqrt(),
            method: Method::Qmc,
            evals: per * reps,
            seed: self.budget.seed,
            converged: true,
        }
    }

    /// Value at an external point (ordered as `plan.external()`).
    pub fn eval(&self, ext: &[Complex64]) -> Result<QuadResult, NumericError> {
        if ext.len() != self.n_ext {
            return Err(NumericError::Shape(format!("expected {} external coordinates, got {}", self.n_ext, ext.len())));
        }
        if self.dim == 0 {
            let v = self.f(&self.point(ext, &[]));
            return Ok(QuadResult { value: v, err_estimate: 0.0, method: Method::Direct, evals: 1, seed: 0, converged: true });
        }
        if self.level.is_none() {
            self.preflight(ext)?;
        }
        Ok(if self.dim <= 3 { self.adaptive(ext) } else { self.qmc(ext) })
    }
}

/// One-shot integration of `plan` at an external point.
pub fn integrate(plan: &CompositeKernel, ext: &[Complex64], params: &Params, contour: &Contour, budget: &Budget) -> Result<QuadResult, NumericError> {
    Integrator::new(plan, params, contour, budget)?.eval(ext)
}
