//! The quaternionic singularity spectral sequence at desk scale: the first
//! page as a grid of finitely generated abelian groups, exhaustive
//! enumeration of the image orders its straight-line differentials can
//! take, and the audit deducing that odd torsion dies in low degrees.

mod differentials;
mod group;
mod page;
mod stems;

pub use differentials::{
    consistent_assignments, consistent_assignments_with, odd_torsion_audit, segal_audit,
    segal_index, DifferentialAssignment, DifferentialSummary, OddTorsionReport, SegalAuditReport,
    SegalTarget, TorsionCellVerdict, TorsionVerdict,
};
pub use group::FinAbGroup;
pub use page::{build_e1_page, E1Cell, E1CellRecord, E1Page};
pub use stems::{StableStemTable, StemEntry, BUILTIN_MAX_STEM};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecSeqError {
    #[error("stable stem {0} unknown: not in the table (supply an extension file)")]
    StemUnknown(u32),
    #[error("cell (p={p}, q={q}) lies outside the built page")]
    CellOutOfRange { p: u32, q: u32 },
    #[error("torsion order {0} is not a prime power > 1")]
    NotPrimePower(u64),
    #[error("extension entry for stem {0} would override the frozen built-in table")]
    ExtensionOverlap(u32),
    #[error("stem extension file invalid: {0}")]
    ExtensionInvalid(String),
    #[error("cell (p={p}, q={q}) is infinite; divisor bounds need a finite target")]
    InfiniteTarget { p: u32, q: u32 },
    #[error(
        "page (p_max={p_max}, q_max={q_max}) too small: audit needs p_max >= {needed_p}, q_max >= {needed_q}"
    )]
    PageTooSmall {
        needed_p: u32,
        needed_q: u32,
        p_max: u32,
        q_max: u32,
    },
}

/// Whether the cobordism group of quaternionic prim maps of `R^{n+3}` with
/// singularities bounded by `r` is infinite: exactly when the classifying
/// space has a rational sphere factor in degree `n + 3`.
pub fn infinite_group_criterion(r: u32, n: u32) -> bool {
    crate::ranks::rank_pi_quaternionic(r, n + 3) > 0
}
