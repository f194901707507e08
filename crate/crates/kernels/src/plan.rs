//! Composite kernels: chains of elementary pairs glued along integrated
//! variables.

use serde::Serialize;
use symexpr::{Family, KernelExpr, ScalarExpr, Variable};
use toda::{Series, SystemId};

use crate::catalog::{build, Elementary};
use crate::pair::{PairId, PairKind, Param};
use crate::KernelError;

/// Chain `K_1(v_0; v_1) K_2(v_1; v_2) ... K_m(v_{m-1}; v_m)`. Stage `0` is
/// always external; the last stage is external for operator plans and
/// integrated for eigenfunction plans.
#[derive(Debug, Clone, Serialize)]
pub struct CompositeKernel {
    pub label: String,
    pub nodes: Vec<Elementary>,
    pub stages: Vec<Vec<Variable>>,
    pub last_external: bool,
    /// Eigenvalue the chain is claimed to carry: `H_src Psi = shift Psi` for
    /// eigenfunction plans, `0` for commuting operator plans.
    pub claimed_shift: ScalarExpr,
}

impl CompositeKernel {
    /// Builds a chain from pairs, renaming every stage to fresh variables:
    /// stage 0 keeps the first node's source variables, later stages use
    /// `u_{j,i}`, and an external last stage uses `y_{*,i}`.
    pub fn chain(label: impl Into<String>, pairs: &[PairId], last_external: bool, claimed_shift: ScalarExpr) -> Result<Self, KernelError> {
        let els = pairs.iter().map(build).collect::<Result<Vec<_>, _>>()?;
        let Some(first) = els.first() else {
            return Err(KernelError::EmptyPlan);
        };
        let mut stages = vec![first.src.vars.clone()];
        let m = els.len();
        let mut nodes = Vec::with_capacity(m);
        for (j, e) in els.iter().enumerate() {
            if j > 0 && (els[j - 1].dst.id != e.src.id || els[j - 1].dst.couplings != e.src.couplings) {
                return Err(KernelError::BrokenChain { link: j, left: els[j - 1].dst.id.to_string(), right: e.src.id.to_string() });
            }
            let len = e.dst.vars.len() as u32;
            let next = if j + 1 == m && last_external {
                Variable::layer_vec(Family::Y, len, len)
            } else {
                (1..=len).map(|i| Variable::new(Family::U, j as u32 + 1, i)).collect()
            };
            nodes.push(e.on_vars(&stages[j], &next)?);
            stages.push(next);
        }
        let plan = CompositeKernel { label: label.into(), nodes, stages, last_external, claimed_shift };
        plan.check_glue()?;
        Ok(plan)
    }

    /// Every adjacent pair shares its middle stage and the two systems agree.
    pub fn check_glue(&self) -> Result<(), KernelError> {
        for (j, w) in self.nodes.windows(2).enumerate() {
            let (a, b) = (&w[0], &w[1]);
            if a.dst.id != b.src.id || a.dst.couplings != b.src.couplings || a.dst.vars != b.src.vars {
                return Err(KernelError::BrokenChain { link: j + 1, left: a.dst.id.to_string(), right: b.src.id.to_string() });
            }
        }
        Ok(())
    }

    pub fn external(&self) -> Vec<Variable> {
        let mut v = self.stages[0].clone();
        if self.last_external {
            v.extend(self.stages.last().into_iter().flatten());
        }
        v
    }

    pub fn integrated(&self) -> Vec<Variable> {
        let end = if self.last_external { self.stages.len() - 1 } else { self.stages.len() };
        self.stages[1..end].iter().flatten().copied().collect()
    }

    pub fn dim(&self) -> usize {
        self.integrated().len()
    }

    /// Product of the node kernels (the integrand).
    pub fn integrand(&self) -> KernelExpr {
        self.nodes.iter().fold(KernelExpr::one(), |k, e| k.mul(&e.kernel))
    }

    pub fn source(&self) -> SystemId {
        self.nodes[0].src.id
    }

    pub fn pairs(&self) -> Vec<PairId> {
        self.nodes.iter().map(|e| e.pair).collect()
    }
}

fn half_sq(p: &ScalarExpr) -> ScalarExpr {
    p.mul(p).mul(&ScalarExpr::from_ratio(1, 2))
}

fn lam(k: u32) -> Param {
    Param::Lambda(k)
}

/// Links of the `I_k(a) -> I_{k-1}(a)` block (three links for `k = 1`).
pub fn lambda_block(k: u32) -> Vec<PairId> {
    let mut v = vec![
        PairId::new(PairKind::IToBC, k),
        PairId::new(PairKind::IToBC, k).with_param(lam(k)).inverted(),
        PairId::new(PairKind::INextToBC, k - 1).with_param(lam(k)),
    ];
    if k > 1 {
        v.push(PairId::new(PairKind::IToBC, k - 1).with_param(lam(k)).inverted());
        v.push(PairId::new(PairKind::IToBC, k - 1).with_param(lam(k)));
        v.push(PairId::new(PairKind::IToBC, k - 1).inverted());
    }
    v
}

/// Seeds of the recursions, as composites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Seed {
    C1,
    B1,
    BC1,
    I1,
    I1ToBC0,
}

impl Seed {
    pub fn pairs(&self) -> Vec<PairId> {
        match self {
            Seed::C1 => vec![PairId::new(PairKind::CToD, 1)],
            Seed::B1 => vec![PairId::new(PairKind::BToBCstar, 1), PairId::new(PairKind::BCstarToB, 1)],
            Seed::BC1 => vec![
                PairId::new(PairKind::IToBC, 1).with_param(lam(1)).inverted(),
                PairId::new(PairKind::INextToBC, 0).with_param(lam(1)),
            ],
            Seed::I1 => lambda_block(1),
            Seed::I1ToBC0 => vec![PairId::new(PairKind::INextToBC, 0).with_param(lam(1))],
        }
    }

    pub fn plan(&self) -> Result<CompositeKernel, KernelError> {
        let shift = match self {
            Seed::BC1 | Seed::I1 => half_sq(&ScalarExpr::lambda(1)),
            Seed::I1ToBC0 => half_sq(&ScalarExpr::lambda(1)),
            _ => ScalarExpr::zero(),
        };
        CompositeKernel::chain(format!("seed-{self:?}").to_lowercase(), &self.pairs(), false, shift)
    }
}

/// Eigenfunction plan for an open chain: a convolution of elementary
/// kernels ending at the empty (or one-variable free) system.
pub fn recursion_plan(series: Series, n: u32) -> Result<CompositeKernel, KernelError> {
    if n == 0 {
        return Err(KernelError::Unsupported(format!("{series} at n = 0")));
    }
    let mut pairs = Vec::new();
    let mut shift = ScalarExpr::zero();
    match series {
        Series::B => {
            for k in (1..=n).rev() {
                pairs.push(PairId::new(PairKind::BToBCstar, k));
                pairs.push(PairId::new(PairKind::BCstarToB, k));
            }
        }
        Series::C | Series::D => {
            let top = if series == Series::D {
                if n < 2 {
                    return Err(KernelError::Unsupported("D_1".into()));
                }
                pairs.push(PairId::new(PairKind::DToC, n));
                n - 1
            } else {
                n
            };
            for k in (1..=top).rev() {
                pairs.push(PairId::new(PairKind::CToD, k));
                if k > 1 {
                    pairs.push(PairId::new(PairKind::DToC, k));
                }
            }
        }
        Series::BC => {
            for k in (1..=n).rev() {
                pairs.push(PairId::new(PairKind::IToBC, k).with_param(lam(k)).inverted());
                pairs.push(PairId::new(PairKind::INextToBC, k - 1).with_param(lam(k)));
                shift = shift.add(&half_sq(&ScalarExpr::lambda(k)));
            }
        }
        Series::I => {
            for k in (1..=n).rev() {
                pairs.extend(lambda_block(k));
                shift = shift.add(&half_sq(&ScalarExpr::lambda(k)));
            }
        }
        _ => return Err(KernelError::Unsupported(format!("recursion for {series}"))),
    }
    CompositeKernel::chain(format!("psi-{}-{n}", series.name()), &pairs, false, shift)
}

/// Two-factor operator plan `Q = K * K^{-1}` (or its mirror) for an affine
/// or semi-infinite series.
pub fn qop_plan(series: Series, n: u32) -> Result<CompositeKernel, KernelError> {
    let fwd = |k: PairKind, m: u32| [PairId::new(k, m), PairId::new(k, m).inverted()];
    let pairs: Vec<PairId> = match series {
        Series::A2even => fwd(PairKind::A2even, n).to_vec(),
        Series::A2odd => fwd(PairKind::A2odd, n).to_vec(),
        Series::B1aff => fwd(PairKind::B1aff, n).to_vec(),
        Series::C1aff => fwd(PairKind::C1aff, n).to_vec(),
        Series::D1aff => fwd(PairKind::D1aff, n).to_vec(),
        Series::D2aff => fwd(PairKind::D2aff, n).to_vec(),
        Series::HatBC => {
            let p = PairId::new(PairKind::HatIToHatBC, n);
            vec![p.inverted(), p]
        }
        Series::HatI => {
            if n < 2 {
                return Err(KernelError::Unsupported("hatI_1".into()));
            }
            fwd(PairKind::HatIToHatBC, n - 1).to_vec()
        }
        Series::Binf => fwd(PairKind::Binf, n).to_vec(),
        Series::Cinf => vec![PairId::new(PairKind::Cinf, n), PairId::new(PairKind::Dinf, n)],
        Series::Dinf => vec![PairId::new(PairKind::Dinf, n), PairId::new(PairKind::Cinf, n)],
        Series::BCinf => fwd(PairKind::BCinf, n).to_vec(),
        Series::Iinf => {
            let p = PairId::new(PairKind::BCinf, n);
            vec![p.inverted(), p]
        }
        _ => return Err(KernelError::Unsupported(format!("Q-operator for {series}"))),
    };
    for p in &pairs {
        p.validate()?;
    }
    CompositeKernel::chain(format!("q-{}-{n}", series.name()), &pairs, true, ScalarExpr::zero())
}

/// Series with a Q-operator plan.
pub const QOP_SERIES: [Series; 13] = [
    Series::A2even,
    Series::A2odd,
    Series::B1aff,
    Series::C1aff,
    Series::D1aff,
    Series::D2aff,
    Series::HatBC,
    Series::HatI,
    Series::Binf,
    Series::Cinf,
    Series::Dinf,
    Series::BCinf,
    Series::Iinf,
];
