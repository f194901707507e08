//! Pair identifiers.

use std::fmt;

use serde::{Serialize, Serializer};
use symexpr::{ScalarExpr, Sym};
use toda::{Series, SystemId};

use crate::KernelError;

/// Elementary intertwiner families. Each kind fixes the source and target
/// systems as functions of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairKind {
    /// `gl_{n+1} -> gl_n` step of the open chain.
    GlStep,
    /// Closed `gl_n` self-intertwiner.
    GlAff,
    /// Pasquier–Gaudin kernel for `A_n^{(1)}`.
    A1affPG,
    /// `BC*_n -> B_{n-1}`.
    BCstarToB,
    /// `B_n -> BC*_n`.
    BToBCstar,
    /// `C_n -> D_n`.
    CToD,
    /// `D_n -> C_{n-1}`.
    DToC,
    /// `BC_n -> I*_n`.
    BCToIstar,
    /// `BC_n -> I*_{n+1}`.
    BCToIstarNext,
    /// `I_n -> BC_n`.
    IToBC,
    /// `I_{n+1} -> BC_n`, with source shift `-p^2/2`.
    INextToBC,
    /// `I*_n` after `e^{z_1} -> sigma_2 e^{z_1}`, to `BC_n`.
    IstarShiftedToBC,
    /// `A^{(2)}_{2n} -> BC'_{n+1}`.
    A2even,
    /// `A^{(2)}_{2n-1}` self-intertwiner (to the dual Hamiltonian).
    A2odd,
    /// `B^{(1)}_n -> BC''_n`.
    B1aff,
    /// `C^{(1)}_n -> D^{(1)}_{n+1}`.
    C1aff,
    /// `D^{(1)}_n -> C^{(1)}_{n-1}`.
    D1aff,
    /// `D^{(2)}_n -> hatBC*_{n+1}`.
    D2aff,
    /// `hatI_{n+1} -> hatBC_n`.
    HatIToHatBC,
    /// Truncated `B_inf -> BC*_inf`.
    Binf,
    /// Truncated `C_inf -> D_inf`.
    Cinf,
    /// Truncated `D_inf -> C_inf`.
    Dinf,
    /// Truncated `BC_inf -> I_inf`.
    BCinf,
}

impl PairKind {
    pub const ALL: [PairKind; 23] = [
        PairKind::GlStep,
        PairKind::GlAff,
        PairKind::A1affPG,
        PairKind::BCstarToB,
        PairKind::BToBCstar,
        PairKind::CToD,
        PairKind::DToC,
        PairKind::BCToIstar,
        PairKind::BCToIstarNext,
        PairKind::IToBC,
        PairKind::INextToBC,
        PairKind::IstarShiftedToBC,
        PairKind::A2even,
        PairKind::A2odd,
        PairKind::B1aff,
        PairKind::C1aff,
        PairKind::D1aff,
        PairKind::D2aff,
        PairKind::HatIToHatBC,
        PairKind::Binf,
        PairKind::Cinf,
        PairKind::Dinf,
        PairKind::BCinf,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PairKind::GlStep => "gl-step",
            PairKind::GlAff => "gl-aff",
            PairKind::A1affPG => "a1aff-pg",
            PairKind::BCstarToB => "bcstar-to-b",
            PairKind::BToBCstar => "b-to-bcstar",
            PairKind::CToD => "c-to-d",
            PairKind::DToC => "d-to-c",
            PairKind::BCToIstar => "bc-to-istar",
            PairKind::BCToIstarNext => "bc-to-istar-next",
            PairKind::IToBC => "i-to-bc",
            PairKind::INextToBC => "i-next-to-bc",
            PairKind::IstarShiftedToBC => "istar-shifted-to-bc",
            PairKind::A2even => "a2even",
            PairKind::A2odd => "a2odd",
            PairKind::B1aff => "b1aff",
            PairKind::C1aff => "c1aff",
            PairKind::D1aff => "d1aff",
            PairKind::D2aff => "d2aff",
            PairKind::HatIToHatBC => "hati-to-hatbc",
            PairKind::Binf => "binf",
            PairKind::Cinf => "cinf",
            PairKind::Dinf => "dinf",
            PairKind::BCinf => "bcinf",
        }
    }

    pub fn parse(s: &str) -> Option<PairKind> {
        PairKind::ALL.iter().copied().find(|k| k.name().eq_ignore_ascii_case(s))
    }

    pub fn min_n(&self) -> u32 {
        match self {
            PairKind::INextToBC => 0,
            PairKind::DToC | PairKind::A2odd | PairKind::B1aff | PairKind::D1aff | PairKind::Cinf | PairKind::Dinf => 2,
            _ => 1,
        }
    }

    /// Whether the kernel carries a spectral/deformation parameter.
    pub fn has_param(&self) -> bool {
        matches!(self, PairKind::IToBC | PairKind::INextToBC | PairKind::HatIToHatBC | PairKind::BCinf)
    }

    /// Source and target of the forward pair.
    pub fn systems(&self, n: u32) -> (SystemId, SystemId) {
        let s = SystemId::new;
        let or_free = |series, k: u32| if k == 0 { SystemId::new(Series::Free, 0) } else { SystemId::new(series, k) };
        match self {
            PairKind::GlStep => (s(Series::A, n + 1), s(Series::A, n)),
            PairKind::GlAff => (s(Series::GlAff, n), s(Series::GlAff, n)),
            PairKind::A1affPG => (s(Series::A1aff, n), s(Series::A1aff, n)),
            PairKind::BCstarToB => (s(Series::BCstar, n), or_free(Series::B, n - 1)),
            PairKind::BToBCstar => (s(Series::B, n), s(Series::BCstar, n)),
            PairKind::CToD => (s(Series::C, n), s(Series::D, n)),
            PairKind::DToC => (s(Series::D, n), s(Series::C, n - 1)),
            PairKind::BCToIstar => (s(Series::BC, n), s(Series::Istar, n)),
            PairKind::BCToIstarNext => (s(Series::BC, n), s(Series::Istar, n + 1)),
            PairKind::IToBC => (s(Series::I, n), s(Series::BC, n)),
            PairKind::INextToBC => (s(Series::I, n + 1), or_free(Series::BC, n)),
            PairKind::IstarShiftedToBC => (s(Series::IstarShifted, n), s(Series::BC, n)),
            PairKind::A2even => (s(Series::A2even, n), s(Series::BCprime, n + 1)),
            PairKind::A2odd => (s(Series::A2odd, n), s(Series::A2oddDual, n)),
            PairKind::B1aff => (s(Series::B1aff, n), s(Series::BCdprime, n)),
            PairKind::C1aff => (s(Series::C1aff, n), s(Series::D1aff, n + 1)),
            PairKind::D1aff => (s(Series::D1aff, n), s(Series::C1aff, n - 1)),
            PairKind::D2aff => (s(Series::D2aff, n), s(Series::HatBCstar, n + 1)),
            PairKind::HatIToHatBC => (s(Series::HatI, n + 1), s(Series::HatBC, n)),
            PairKind::Binf => (s(Series::Binf, n), s(Series::BCstar, n)),
            PairKind::Cinf => (s(Series::Cinf, n), s(Series::Dinf, n)),
            PairKind::Dinf => (s(Series::Dinf, n), s(Series::Cinf, n)),
            PairKind::BCinf => (s(Series::BCinf, n), s(Series::Iinf, n)),
        }
    }
}

impl fmt::Display for PairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The symbol a parametrized kernel uses: the deformation `a` or a
/// spectral parameter `lambda_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    A,
    Lambda(u32),
}

impl Param {
    pub fn expr(&self) -> ScalarExpr {
        match self {
            Param::A => ScalarExpr::a(),
            Param::Lambda(k) => ScalarExpr::lambda(*k),
        }
    }

    pub fn sym(&self) -> Sym {
        match self {
            Param::A => Sym::A,
            Param::Lambda(k) => Sym::Lambda(*k),
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::A => f.write_str("a"),
            Param::Lambda(k) => write!(f, "lambda{k}"),
        }
    }
}

/// A cataloged pair at a given size. `inverse` transposes source and
/// target; the kernel expression is unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairId {
    pub kind: PairKind,
    pub n: u32,
    pub inverse: bool,
    pub param: Param,
}

impl PairId {
    pub fn new(kind: PairKind, n: u32) -> Self {
        PairId { kind, n, inverse: false, param: Param::A }
    }

    pub fn with_param(mut self, p: Param) -> Self {
        self.param = p;
        self
    }

    pub fn inverted(mut self) -> Self {
        self.inverse = !self.inverse;
        self
    }

    pub fn validate(&self) -> Result<(), KernelError> {
        if self.n < self.kind.min_n() {
            return Err(KernelError::OutOfRange { pair: self.to_string(), min: self.kind.min_n() });
        }
        if !self.kind.has_param() && self.param != Param::A {
            return Err(KernelError::UnexpectedParam(self.to_string()));
        }
        Ok(())
    }

    pub fn source(&self) -> SystemId {
        let (s, t) = self.kind.systems(self.n);
        if self.inverse {
            t
        } else {
            s
        }
    }

    pub fn target(&self) -> SystemId {
        let (s, t) = self.kind.systems(self.n);
        if self.inverse {
            s
        } else {
            t
        }
    }

    /// Parses `c-to-d[2]`, `inv:i-to-bc[1](lambda1)`.
    pub fn parse(s: &str) -> Result<PairId, KernelError> {
        let bad = || KernelError::UnknownPair(s.to_string());
        let (inverse, rest) = match s.trim().strip_prefix("inv:") {
            Some(r) => (true, r),
            None => (false, s.trim()),
        };
        let (body, param) = match rest.split_once('(') {
            Some((b, p)) => {
                let p = p.strip_suffix(')').ok_or_else(bad)?;
                let param = if p == "a" {
                    Param::A
                } else {
                    Param::Lambda(p.strip_prefix("lambda").and_then(|k| k.parse().ok()).ok_or_else(bad)?)
                };
                (b, param)
            }
            None => (rest, Param::A),
        };
        let (name, n) = body.split_once('[').ok_or_else(bad)?;
        let n: u32 = n.strip_suffix(']').and_then(|n| n.parse().ok()).ok_or_else(bad)?;
        let kind = PairKind::parse(name).ok_or_else(bad)?;
        let id = PairId { kind, n, inverse, param };
        id.validate()?;
        Ok(id)
    }
}

impl fmt::Display for PairId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            f.write_str("inv:")?;
        }
        write!(f, "{}[{}]", self.kind, self.n)?;
        if self.param != Param::A {
            write!(f, "({})", self.param)?;
        }
        Ok(())
    }
}

impl Serialize for PairId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Transposed pair; an involution.
pub fn inverse_pair(p: &PairId) -> PairId {
    p.inverted()
}
