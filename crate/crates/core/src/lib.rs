//! Exact-arithmetic calculators for the cobordism theory of prim Morin maps.
//!
//! Everything here is integer or rational arithmetic; no floating point
//! enters any rank, count, or zero-set decision. The crate is organized
//! around five independent pieces:
//!
//! - [`partitions`]: bounded partition counting `p_{<=t}(m)` with an
//!   exhaustive enumeration oracle;
//! - [`poincare`]: Poincaré series of graded polynomial rings, `BSO(n)`,
//!   projective spaces, and Thom-space degree shifts;
//! - [`ranks`]: homotopy-rank profiles of the classifying spaces of prim
//!   maps with bounded singularities, cobordism-group ranks from Betti
//!   data, and a comparator against the closed partition formula;
//! - [`specseq`]: the first page of the quaternionic singularity spectral
//!   sequence, divisor bookkeeping for its straight-line differentials,
//!   and an odd-torsion audit;
//! - [`umbrella`]: exact verification of the Whitney-umbrella normal form,
//!   its embedding lift, the singularity-detecting section, and the
//!   quaternionic framing of the lift's normal bundle.

pub mod partitions;
pub mod poincare;
pub mod ranks;
pub mod specseq;
pub mod umbrella;
