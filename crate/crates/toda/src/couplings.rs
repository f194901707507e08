//! Coupling constants keyed by the catalog's per-family index.

use std::collections::BTreeMap;

use serde::Serialize;
use symexpr::{ScalarExpr, Sym};

use crate::{Series, SystemId, TodaError};

/// Coupling values `g_i` and the optional deformation parameter of the
/// Inozemtsev families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Couplings {
    pub g: BTreeMap<u32, ScalarExpr>,
    pub deformation: Option<ScalarExpr>,
}

/// Indices `i` of the couplings `g_i` a system's Hamiltonian uses.
pub fn coupling_indices(id: &SystemId) -> Vec<u32> {
    let n = id.rank;
    let upto = |k: u32| (1..=k).collect::<Vec<_>>();
    match id.series {
        Series::Free => vec![],
        Series::A => upto(n.saturating_sub(1)),
        Series::GlAff => upto(n),
        Series::A1aff => upto(n + 1),
        Series::B | Series::C | Series::BCstar | Series::Binf | Series::Cinf => upto(n),
        Series::D | Series::Dinf => {
            if n >= 2 {
                upto(n)
            } else {
                vec![]
            }
        }
        Series::BC | Series::BCinf | Series::I | Series::Istar | Series::Iinf | Series::IstarShifted => upto(n + 1),
        Series::A2even | Series::C1aff | Series::D2aff => upto(n + 2),
        Series::A2odd | Series::A2oddDual | Series::B1aff | Series::BCdprime | Series::BCprime | Series::D1aff | Series::HatBCstar => upto(n + 1),
        Series::HatBC => upto(n + 3),
        Series::HatI => upto(n + 2),
    }
}

impl Couplings {
    pub fn empty() -> Self {
        Couplings { g: BTreeMap::new(), deformation: None }
    }

    /// Symbolic couplings `g_i := g_i` for every index the system needs.
    pub fn generic(id: &SystemId) -> Self {
        let g = coupling_indices(id).into_iter().map(|i| (i, ScalarExpr::g(i))).collect();
        Couplings { g, deformation: default_deformation(id.series) }
    }

    pub fn with(mut self, i: u32, v: ScalarExpr) -> Self {
        self.g.insert(i, v);
        self
    }

    pub fn with_deformation(mut self, a: ScalarExpr) -> Self {
        self.deformation = Some(a);
        self
    }

    pub fn get(&self, i: u32) -> Result<ScalarExpr, TodaError> {
        self.g.get(&i).cloned().ok_or(TodaError::MissingCoupling(i))
    }

    /// `sqrt(g_i / 2)`, as the symbol `sigma_i` when `g_i` is still the bare
    /// symbol, otherwise as an exact monomial square root.
    pub fn sigma(&self, i: u32) -> Result<ScalarExpr, TodaError> {
        let v = self.get(i)?;
        if v == ScalarExpr::g(i) {
            return Ok(ScalarExpr::sigma(i));
        }
        let half = v.mul(&ScalarExpr::from_ratio(1, 2));
        half.monomial_sqrt().ok_or(TodaError::NonSquareCoupling(i))
    }

    /// Applies `f` to every value.
    pub fn map(&self, f: impl Fn(&ScalarExpr) -> Result<ScalarExpr, symexpr::SymError>) -> Result<Self, TodaError> {
        let g = self.g.iter().map(|(i, v)| Ok((*i, f(v)?))).collect::<Result<_, TodaError>>()?;
        let deformation = self.deformation.as_ref().map(&f).transpose()?;
        Ok(Couplings { g, deformation })
    }

    pub fn check(&self, id: &SystemId) -> Result<(), TodaError> {
        let want = coupling_indices(id);
        let got: Vec<u32> = self.g.keys().copied().collect();
        if want != got {
            return Err(TodaError::CouplingMismatch { system: id.to_string(), expected: want, got });
        }
        Ok(())
    }
}

fn default_deformation(s: Series) -> Option<ScalarExpr> {
    match s {
        Series::I => Some(ScalarExpr::iota().mul(&ScalarExpr::a())),
        Series::HatI | Series::Iinf => Some(ScalarExpr::a()),
        _ => None,
    }
}

/// The deformation actually used by a system (zero for the starred family).
pub fn deformation_of(id: &SystemId, c: &Couplings) -> ScalarExpr {
    match id.series {
        Series::Istar | Series::IstarShifted => ScalarExpr::zero(),
        _ => c.deformation.clone().or_else(|| default_deformation(id.series)).unwrap_or_else(ScalarExpr::zero),
    }
}

/// Substitution eliminating `g_i` in favour of `sigma_i` wherever `sigma_i`
/// occurs in `syms`.
pub fn sigma_elimination(syms: impl IntoIterator<Item = Sym>) -> BTreeMap<Sym, ScalarExpr> {
    syms.into_iter()
        .filter_map(|s| match s {
            Sym::Sigma(i) => Some((Sym::G(i), ScalarExpr::from_int(2).mul(&ScalarExpr::sigma(i)).mul(&ScalarExpr::sigma(i)))),
            _ => None,
        })
        .collect()
}
