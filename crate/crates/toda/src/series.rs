//! System identifiers.

use serde::{Serialize, Serializer};
use std::fmt;

use crate::TodaError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Series {
    /// Open `gl_n` chain on `n` variables.
    A,
    /// Closed `gl_n` chain on `n` variables, couplings `g_1..g_n`.
    GlAff,
    /// `A_n^{(1)}` on `n+1` variables with the extra root `e_1 - e_{n+1}` carried by `g_1`.
    A1aff,
    B,
    C,
    D,
    BCstar,
    BC,
    Istar,
    I,
    A2even,
    A2odd,
    /// The second Hamiltonian of the self-intertwiner of `A_{2n-1}^{(2)}`.
    A2oddDual,
    B1aff,
    C1aff,
    D1aff,
    D2aff,
    BCprime,
    BCdprime,
    HatBC,
    HatBCstar,
    HatI,
    /// `I^*_n` after the shift `e^{z_1} -> sigma_2 e^{z_1}`.
    IstarShifted,
    Binf,
    Cinf,
    Dinf,
    BCinf,
    Iinf,
    /// Pure kinetic term, no potential.
    Free,
}

impl Series {
    pub const ALL: [Series; 29] = [
        Series::A,
        Series::GlAff,
        Series::A1aff,
        Series::B,
        Series::C,
        Series::D,
        Series::BCstar,
        Series::BC,
        Series::Istar,
        Series::I,
        Series::A2even,
        Series::A2odd,
        Series::A2oddDual,
        Series::B1aff,
        Series::C1aff,
        Series::D1aff,
        Series::D2aff,
        Series::BCprime,
        Series::BCdprime,
        Series::HatBC,
        Series::HatBCstar,
        Series::HatI,
        Series::IstarShifted,
        Series::Binf,
        Series::Cinf,
        Series::Dinf,
        Series::BCinf,
        Series::Iinf,
        Series::Free,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Series::A => "A",
            Series::GlAff => "GlAff",
            Series::A1aff => "A1aff",
            Series::B => "B",
            Series::C => "C",
            Series::D => "D",
            Series::BCstar => "BCstar",
            Series::BC => "BC",
            Series::Istar => "Istar",
            Series::I => "I",
            Series::A2even => "A2even",
            Series::A2odd => "A2odd",
            Series::A2oddDual => "A2oddDual",
            Series::B1aff => "B1aff",
            Series::C1aff => "C1aff",
            Series::D1aff => "D1aff",
            Series::D2aff => "D2aff",
            Series::BCprime => "BCprime",
            Series::BCdprime => "BCdprime",
            Series::HatBC => "hatBC",
            Series::HatBCstar => "hatBCstar",
            Series::HatI => "hatI",
            Series::IstarShifted => "IstarShifted",
            Series::Binf => "Binf",
            Series::Cinf => "Cinf",
            Series::Dinf => "Dinf",
            Series::BCinf => "BCinf",
            Series::Iinf => "Iinf",
            Series::Free => "Free",
        }
    }

    pub fn parse(s: &str) -> Option<Series> {
        Series::ALL.iter().copied().find(|x| x.name().eq_ignore_ascii_case(s))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Series::Binf | Series::Cinf | Series::Dinf | Series::BCinf | Series::Iinf)
    }

    pub fn is_affine(&self) -> bool {
        matches!(
            self,
            Series::GlAff
                | Series::A1aff
                | Series::A2even
                | Series::A2odd
                | Series::A2oddDual
                | Series::B1aff
                | Series::C1aff
                | Series::D1aff
                | Series::D2aff
                | Series::BCprime
                | Series::BCdprime
                | Series::HatBC
                | Series::HatBCstar
                | Series::HatI
        )
    }

    /// Smallest rank for which the Hamiltonian is defined.
    pub fn min_rank(&self) -> u32 {
        match self {
            Series::A2odd | Series::A2oddDual | Series::B1aff | Series::D1aff | Series::BCprime | Series::HatI | Series::Dinf => 2,
            _ => 1,
        }
    }

    /// Finite family a semi-infinite series truncates to.
    pub fn truncated(&self) -> Option<Series> {
        match self {
            Series::Binf => Some(Series::B),
            Series::Cinf => Some(Series::C),
            Series::Dinf => Some(Series::D),
            Series::BCinf => Some(Series::BC),
            Series::Iinf => Some(Series::I),
            _ => None,
        }
    }

    /// Whether a distinct as-printed variant exists for this series.
    pub fn has_printed_variant(&self) -> bool {
        matches!(self, Series::HatBC | Series::HatI | Series::D1aff | Series::D2aff | Series::I | Series::Iinf)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A Toda system of given series and rank.
///
/// `printed` selects the literal transcription of a display where it
/// disagrees with the corrected catalog form (see [`Series::has_printed_variant`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SystemId {
    pub series: Series,
    pub rank: u32,
    pub truncation: Option<u32>,
    pub printed: bool,
}

impl SystemId {
    pub fn new(series: Series, rank: u32) -> Self {
        SystemId { series, rank, truncation: if series.is_infinite() { Some(rank) } else { None }, printed: false }
    }

    pub fn printed(mut self) -> Self {
        self.printed = true;
        self
    }

    pub fn validate(&self) -> Result<(), TodaError> {
        let min = self.series.min_rank();
        if self.series == Series::Free && self.rank == 0 {
            return Ok(());
        }
        if self.series.is_infinite() {
            match self.truncation {
                Some(t) if t >= min && t == self.rank => Ok(()),
                _ => Err(TodaError::RankOutOfRange { system: self.to_string(), min }),
            }
        } else if self.rank < min || self.truncation.is_some() {
            Err(TodaError::RankOutOfRange { system: self.to_string(), min })
        } else {
            Ok(())
        }
    }

    /// Number of chain variables.
    pub fn nvars(&self) -> u32 {
        match self.series {
            Series::A1aff => self.rank + 1,
            _ => self.rank,
        }
    }

    /// Parses `B_3`, `A1aff_2`, `Binf[3]`.
    pub fn parse(s: &str) -> Result<SystemId, TodaError> {
        let bad = || TodaError::UnknownSystem(s.to_string());
        let s = s.trim();
        let (name, rank) = if let Some(open) = s.find('[') {
            let close = s.strip_suffix(']').ok_or_else(bad)?;
            (&s[..open], close[open + 1..].parse::<u32>().map_err(|_| bad())?)
        } else {
            let (n, r) = s.rsplit_once('_').ok_or_else(bad)?;
            (n, r.parse::<u32>().map_err(|_| bad())?)
        };
        let series = Series::parse(name).ok_or_else(bad)?;
        let id = SystemId::new(series, rank);
        id.validate()?;
        Ok(id)
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.truncation {
            Some(t) => write!(f, "{}[{}]", self.series, t)?,
            None => write!(f, "{}_{}", self.series, self.rank)?,
        }
        if self.printed {
            f.write_str("(printed)")?;
        }
        Ok(())
    }
}

impl Serialize for SystemId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
