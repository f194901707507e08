//! Human-readable summaries of catalog pairs.

use std::fmt::Write;

use kernels::{readings, PairId, PairKind};
use verify::{typo_arbiter, Status};

use crate::CliError;

fn summary(kind: PairKind) -> &'static str {
    match kind {
        PairKind::GlStep => "step of the open gl chain: intertwines gl(n+1) with gl(n)",
        PairKind::GlAff => "Baxter Q-operator kernel of the closed gl(n) chain",
        PairKind::A1affPG => "Pasquier-Gaudin Q-operator kernel of the affine A(1) chain",
        PairKind::BCstarToB => "BC*(n) to B(n-1); second half of the B recursion step",
        PairKind::BToBCstar => "B(n) to BC*(n); first half of the B recursion step",
        PairKind::CToD => "C(n) to D(n)",
        PairKind::DToC => "D(n) to C(n-1)",
        PairKind::BCToIstar => "BC(n) to the Inozemtsev-type chain I*(n)",
        PairKind::BCToIstarNext => "BC(n) to I*(n+1)",
        PairKind::IToBC => "Inozemtsev chain I(n) to BC(n), deformed by a spectral parameter",
        PairKind::INextToBC => "I(n+1) to BC(n); the source carries the shift -p^2/2",
        PairKind::IstarShiftedToBC => "I*(n) with its first exponential rescaled by sigma2, to BC(n)",
        PairKind::A2even => "twisted affine A(2)(2n) to BC'(n+1)",
        PairKind::A2odd => "twisted affine A(2)(2n-1) to its dual",
        PairKind::B1aff => "affine B(1)(n) to BC''(n)",
        PairKind::C1aff => "affine C(1)(n) to D(1)(n+1)",
        PairKind::D1aff => "affine D(1)(n) to C(1)(n-1)",
        PairKind::D2aff => "twisted affine D(2)(n) to hatBC*(n+1)",
        PairKind::HatIToHatBC => "hatI(n+1) to hatBC(n)",
        PairKind::Binf => "semi-infinite B truncated at n sites",
        PairKind::Cinf => "semi-infinite C to D, truncated at n sites",
        PairKind::Dinf => "semi-infinite D to C, truncated at n sites",
        PairKind::BCinf => "semi-infinite BC to I, truncated at n sites",
    }
}

/// Parses a pair id, listing the valid kinds on failure.
pub fn parse_pair(s: &str) -> Result<PairId, CliError> {
    PairId::parse(s).map_err(|e| {
        let kinds: Vec<&str> = PairKind::ALL.iter().map(|k| k.name()).collect();
        CliError::Config(format!("{e}; pairs are written kind[n], optionally inv:kind[n](lambdaK), with kind one of {}", kinds.join(", ")))
    })
}

/// Kernel, both Hamiltonians, candidate readings and the arbiter's choice.
pub fn explain(pair: &str) -> Result<String, CliError> {
    let id = parse_pair(pair)?;
    let rs = readings(&id)?;
    let mut s = String::new();
    let cat = &rs[0];
    let _ = writeln!(s, "{id}: {} -> {}", id.source(), id.target());
    let _ = writeln!(s, "  {}", summary(id.kind));
    let _ = writeln!(s, "kernel:\n  {}", cat.kernel.latex());
    let _ = writeln!(s, "source Hamiltonian:\n  {}", cat.src.latex());
    let _ = writeln!(s, "target Hamiltonian:\n  {}", cat.dst.latex());
    if rs.len() == 1 {
        let c = verify::certify(&id)?;
        let _ = writeln!(s, "reading: {} ({})", cat.label, status_word(c.status));
    } else {
        let a = typo_arbiter(&id)?;
        let _ = writeln!(s, "readings:");
        for (r, (label, st)) in rs.iter().zip(&a.statuses) {
            let note = if r.note.is_empty() { String::new() } else { format!(" - {}", r.note) };
            let _ = writeln!(s, "  {label}: {}{note}", status_word(*st));
        }
        match a.chosen_label() {
            Some(l) => {
                let _ = writeln!(s, "chosen reading: {l}");
            }
            None => {
                let _ = writeln!(s, "chosen reading: {} (catalog default; the residual does not single out one reading)", cat.label);
            }
        }
    }
    Ok(s)
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::CertifiedZero => "certified zero",
        Status::Nonzero => "nonzero",
    }
}
