//! Simple roots, Dynkin diagrams and catalog descriptors.

use serde::Serialize;

use crate::couplings::coupling_indices;
use crate::hamiltonian::{build_hamiltonian, default_vars};
use crate::{Couplings, Series, SystemId, TodaError};

/// A simple root in the orthonormal basis `e_1..e_m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Root {
    pub coords: Vec<i64>,
    /// `true` for the doubled member `2 e_1` (or `-2 e_n`) of a non-reduced pair.
    pub nonreduced: bool,
    /// Boundary term given by an inverse `sinh^2` rather than an exponential.
    pub trigonometric: bool,
}

impl Root {
    fn new(m: usize, terms: &[(usize, i64)]) -> Root {
        let mut coords = vec![0; m];
        for (i, c) in terms {
            coords[i - 1] += c;
        }
        Root { coords, nonreduced: false, trigonometric: false }
    }

    fn doubled(mut self) -> Root {
        self.nonreduced = true;
        self
    }

    fn dot(&self, o: &Root) -> i64 {
        self.coords.iter().zip(&o.coords).map(|(a, b)| a * b).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| *c == 0)
    }

    pub fn latex(&self) -> String {
        let mut s = String::new();
        for (i, c) in self.coords.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 { "-" } else if s.is_empty() { "" } else { "+" };
            let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
            s.push_str(&format!("{sign}{mag}e_{}", i + 1));
        }
        if s.is_empty() {
            "0".into()
        } else {
            s
        }
    }
}

/// Edge of a Dynkin diagram between simple roots `a` and `b` (indices into
/// the reduced root list). `lines = a_{ab} a_{ba}`; `arrow_to` names the
/// shorter root when lengths differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DynkinEdge {
    pub a: usize,
    pub b: usize,
    pub lines: i64,
    pub arrow_to: Option<usize>,
}

/// One catalog entry.
#[derive(Debug, Clone, Serialize)]
pub struct SystemDescriptor {
    pub id: SystemId,
    pub series: String,
    pub rank: u32,
    pub vars: Vec<String>,
    pub roots: Vec<Root>,
    pub dynkin: Vec<DynkinEdge>,
    /// Indices `i` of the couplings `g_i`, in catalog order.
    pub couplings: Vec<u32>,
    /// How the coupling indices attach to the roots.
    pub index_map: &'static str,
    pub tag: &'static str,
    pub hamiltonian: String,
}

/// Simple roots of `id`, ordered as the terms of its Hamiltonian.
pub fn simple_roots(id: &SystemId) -> Result<Vec<Root>, TodaError> {
    id.validate()?;
    let m = id.nvars() as usize;
    let r = |t: &[(usize, i64)]| Root::new(m, t);
    let chain = |from: usize| (from..m).map(move |i| Root::new(m, &[(i + 1, 1), (i, -1)]));
    let mut out = Vec::new();
    let pair_head = |out: &mut Vec<Root>| {
        out.push(r(&[(1, 1)]));
        out.push(r(&[(1, 2)]).doubled());
    };
    let s = id.series;
    match s {
        Series::Free => {}
        Series::A => out.extend(chain(1)),
        Series::GlAff => {
            out.extend(chain(1));
            if m >= 2 {
                out.push(r(&[(1, 1), (m, -1)]));
            }
        }
        Series::A1aff => {
            out.push(r(&[(1, 1), (m, -1)]));
            out.extend(chain(1));
        }
        Series::B | Series::Binf | Series::B1aff | Series::D2aff | Series::A2even => out.push(r(&[(1, 1)])),
        Series::C | Series::Cinf | Series::A2odd | Series::C1aff => out.push(r(&[(1, 2)])),
        Series::D | Series::Dinf | Series::D1aff | Series::A2oddDual => {
            if m >= 2 {
                out.push(r(&[(1, 1), (2, 1)]));
            }
        }
        Series::BCstar | Series::BC | Series::BCinf | Series::BCprime | Series::BCdprime | Series::HatBC | Series::HatBCstar => {
            pair_head(&mut out)
        }
        Series::I | Series::Istar | Series::IstarShifted | Series::Iinf | Series::HatI => {
            pair_head(&mut out);
            for x in out.iter_mut() {
                x.trigonometric = true;
            }
        }
    }
    if !matches!(s, Series::Free | Series::A | Series::GlAff | Series::A1aff) {
        out.extend(chain(1));
    }
    match s {
        Series::A2even | Series::BCdprime | Series::C1aff | Series::A2oddDual => out.push(r(&[(m, -2)])),
        Series::BCprime | Series::A2odd | Series::B1aff | Series::D1aff => out.push(r(&[(m, -1), (m - 1, -1)])),
        Series::D2aff => out.push(r(&[(m, -1)])),
        Series::HatBC | Series::HatBCstar => {
            out.push(r(&[(m, -1)]));
            out.push(r(&[(m, -2)]).doubled());
        }
        Series::HatI => {
            let mut a = r(&[(m, -1)]);
            let mut b = r(&[(m, -2)]).doubled();
            a.trigonometric = true;
            b.trigonometric = true;
            out.push(a);
            out.push(b);
        }
        _ => {}
    }
    if s == Series::D1aff && m == 2 && !id.printed {
        out.push(r(&[(1, 1), (2, -1)]));
    }
    Ok(out)
}

/// Dynkin edges among the reduced simple roots.
pub fn dynkin_edges(roots: &[Root]) -> Vec<DynkinEdge> {
    let reduced: Vec<&Root> = roots.iter().filter(|r| !r.nonreduced && !r.is_zero()).collect();
    let mut out = Vec::new();
    for i in 0..reduced.len() {
        for j in i + 1..reduced.len() {
            let (a, b) = (reduced[i], reduced[j]);
            let ab = a.dot(b);
            if ab == 0 {
                continue;
            }
            let (aa, bb) = (a.dot(a), b.dot(b));
            // Cartan integers 2(a,b)/(b,b) and 2(a,b)/(a,a)
            let lines = (2 * ab / bb) * (2 * ab / aa);
            let arrow_to = match aa.cmp(&bb) {
                std::cmp::Ordering::Greater => Some(j),
                std::cmp::Ordering::Less => Some(i),
                std::cmp::Ordering::Equal => None,
            };
            out.push(DynkinEdge { a: i, b: j, lines, arrow_to });
        }
    }
    out
}

fn index_map(s: Series) -> &'static str {
    match s {
        Series::Free => "none",
        Series::A | Series::GlAff => "g_i on e_{i+1}-e_i",
        Series::A1aff => "g_1 on e_1-e_{n+1}, g_{i+1} on e_{i+1}-e_i",
        Series::BC | Series::BCinf | Series::HatBC => "g_1 on e_1, g_2 on 2e_1, g_{i+2} on e_{i+1}-e_i",
        Series::I | Series::Istar | Series::IstarShifted | Series::Iinf | Series::HatI => {
            "g_1, g_2 on the boundary pair e_1, 2e_1 (through g_1/sqrt(2 g_2)), g_{i+2} on e_{i+1}-e_i"
        }
        _ => "g_1 on the first boundary root, g_{i+1} on e_{i+1}-e_i, remaining indices on the last boundary root",
    }
}

fn tag(s: Series) -> &'static str {
    match s {
        Series::A => "open-gl",
        Series::GlAff => "closed-gl",
        Series::A1aff => "affine-a1",
        Series::B => "open-b",
        Series::C => "open-c",
        Series::D => "open-d",
        Series::BCstar => "open-bcstar",
        Series::BC => "open-bc",
        Series::Istar => "open-istar",
        Series::I => "open-inozemtsev",
        Series::A2even => "affine-a2-even",
        Series::A2odd => "affine-a2-odd",
        Series::A2oddDual => "affine-a2-odd-dual",
        Series::B1aff => "affine-b1",
        Series::C1aff => "affine-c1",
        Series::D1aff => "affine-d1",
        Series::D2aff => "affine-d2",
        Series::BCprime => "affine-bc-prime",
        Series::BCdprime => "affine-bc-dprime",
        Series::HatBC => "closed-bc",
        Series::HatBCstar => "closed-bcstar",
        Series::HatI => "closed-inozemtsev",
        Series::IstarShifted => "open-istar-shifted",
        Series::Binf => "semi-infinite-b",
        Series::Cinf => "semi-infinite-c",
        Series::Dinf => "semi-infinite-d",
        Series::BCinf => "semi-infinite-bc",
        Series::Iinf => "semi-infinite-inozemtsev",
        Series::Free => "free",
    }
}

/// Full descriptor of one system.
pub fn describe(id: &SystemId) -> Result<SystemDescriptor, TodaError> {
    let roots = simple_roots(id)?;
    let h = build_hamiltonian(id, &Couplings::generic(id), None)?;
    Ok(SystemDescriptor {
        id: *id,
        series: id.series.name().to_string(),
        rank: id.rank,
        vars: default_vars(id).iter().map(|v| v.name()).collect(),
        dynkin: dynkin_edges(&roots),
        roots,
        couplings: coupling_indices(id),
        index_map: index_map(id.series),
        tag: tag(id.series),
        hamiltonian: h.latex(),
    })
}

/// Every cataloged series at ranks `min..=max_rank` (at least the minimum rank).
pub fn list_systems(max_rank: u32) -> Vec<SystemDescriptor> {
    let mut out = Vec::new();
    for s in Series::ALL {
        let lo = s.min_rank();
        for n in lo..=max_rank.max(lo) {
            let mut ids = vec![SystemId::new(s, n)];
            if s.has_printed_variant() {
                ids.push(SystemId::new(s, n).printed());
            }
            for id in ids {
                if let Ok(d) = describe(&id) {
                    out.push(d);
                }
            }
        }
    }
    out
}
