//! Rank formulas for the classifying spaces of prim maps with singularities
//! bounded by order `r`, and the cobordism-group ranks they induce.
//!
//! The authoritative formulas are the chain-level ones:
//!
//! - codimension `k` odd:
//!   `rk pi_j = rk H_{j-k}(BSO(k+1)) - rk H_{j+1-(r+2)(k+1)}(BSO(k+1))`
//! - codimension `k` even:
//!   `rk pi_j = rk H_{j+2-(r+2)(k+1)}(BSO(k+1)) + rk H_{j-k}(BSO(k+1))`
//! - quaternionic (codimension 3): the classifying space is rationally a
//!   product of odd spheres `S^3 x S^7 x ... x S^{4r+3}`, so ranks are 1
//!   exactly in those degrees.
//!
//! The closed partition formula ([`corollary_eval`]) is kept as a
//! comparator only: for odd `k` it disagrees with the chain-level values on
//! small instances, and [`corollary_compare`] documents every disagreement
//! instead of resolving it silently.
//!
//! A cobordism-group rank is the Betti-weighted sum of a rank profile
//! ([`cobordism_rank`]); degree zero is excluded from the sum.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::partitions::{count_bounded_partitions, PartitionQuery};
use crate::poincare::{bso_series, PoincareSeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RankError {
    #[error("unoriented ranks are not specified by the implemented formulas; use 'so' or 'sp'")]
    UnsupportedFlavor,
    #[error("unknown flavor '{0}'; expected 'so' or 'sp'")]
    UnknownFlavor(String),
    #[error("quaternionic maps have codimension 3; got k = {0}")]
    QuaternionicCodimension(u32),
    #[error("oriented profiles need an explicit codimension k")]
    MissingCodimension,
    #[error("Betti vector of dimension {betti} exceeds profile range {profile}")]
    DimensionMismatch { betti: u32, profile: u32 },
    #[error("Betti vector malformed: {0}")]
    BettiFormat(String),
}

/// Normal-structure flavor of the maps being classified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Oriented,
    Quaternionic,
}

impl std::fmt::Display for Flavor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Flavor::Oriented => write!(f, "so"),
            Flavor::Quaternionic => write!(f, "sp"),
        }
    }
}

impl FromStr for Flavor {
    type Err = RankError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "so" | "oriented" => Ok(Flavor::Oriented),
            "sp" | "quaternionic" => Ok(Flavor::Quaternionic),
            "o" | "bo" | "unoriented" => Err(RankError::UnsupportedFlavor),
            other => Err(RankError::UnknownFlavor(other.to_string())),
        }
    }
}

fn series_rank(s: &PoincareSeries, d: i64) -> u64 {
    if d < 0 {
        0
    } else {
        s.rank(d)
    }
}

/// Rank of `pi_j` of the classifying space for oriented prim maps of
/// codimension `k` with singularities bounded by `r`.
pub fn rank_pi_oriented(k: u32, r: u32, j: u32) -> u64 {
    assert!(k >= 1, "codimension must be positive");
    assert!(j >= 1, "degree must be positive");
    let (k_i, r_i, j_i) = (i64::from(k), i64::from(r), i64::from(j));
    let block = (r_i + 2) * (k_i + 1);
    let d_base = j_i - k_i;
    let d_twist = j_i + if k % 2 == 1 { 1 } else { 2 } - block;
    let needed = d_base.max(d_twist).max(0) as u32;
    let series = bso_series(k + 1, needed).expect("k + 1 >= 2");
    let base = series_rank(&series, d_base);
    let twist = series_rank(&series, d_twist);
    if k % 2 == 1 {
        // The twisted degree sits (r+1)(k+1) below the base degree, a
        // multiple of the Euler-generator step, so the difference can
        // never go negative; a failure here means the series is wrong.
        base.checked_sub(twist)
            .unwrap_or_else(|| panic!("negative rank at k={k}, r={r}, j={j}"))
    } else {
        base + twist
    }
}

/// Rank of `pi_j` for quaternionic prim maps (codimension 3): 1 exactly
/// when `j = 3 mod 4` and `j <= 4r + 3`.
pub fn rank_pi_quaternionic(r: u32, j: u32) -> u64 {
    assert!(j >= 1, "degree must be positive");
    u64::from(j % 4 == 3 && j <= 4 * r + 3)
}

/// Ranks of `pi_j` for `1 <= j <= max_degree`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankProfile {
    flavor: Flavor,
    k: u32,
    r: u32,
    ranks: Vec<u64>,
}

impl RankProfile {
    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn codimension(&self) -> u32 {
        self.k
    }

    pub fn singularity_bound(&self) -> u32 {
        self.r
    }

    pub fn max_degree(&self) -> u32 {
        self.ranks.len() as u32
    }

    /// Rank of `pi_j`; `j` must lie in `1..=max_degree`.
    pub fn rank(&self, j: u32) -> u64 {
        assert!(
            1 <= j && j <= self.max_degree(),
            "degree {j} out of profile range"
        );
        self.ranks[(j - 1) as usize]
    }

    pub fn nonzero_degrees(&self) -> Vec<u32> {
        (1..=self.max_degree())
            .filter(|&j| self.rank(j) != 0)
            .collect()
    }
}

/// Batch the per-degree ranks into a profile. For the quaternionic flavor
/// the codimension is fixed to 3; pass `None` or `Some(3)`.
pub fn rank_profile(
    flavor: Flavor,
    k: Option<u32>,
    r: u32,
    max_degree: u32,
) -> Result<RankProfile, RankError> {
    assert!(max_degree >= 1);
    let (k, ranks) = match flavor {
        Flavor::Oriented => {
            let k = k.ok_or(RankError::MissingCodimension)?;
            let ranks = (1..=max_degree)
                .map(|j| rank_pi_oriented(k, r, j))
                .collect();
            (k, ranks)
        }
        Flavor::Quaternionic => {
            if let Some(k) = k {
                if k != 3 {
                    return Err(RankError::QuaternionicCodimension(k));
                }
            }
            let ranks = (1..=max_degree)
                .map(|j| rank_pi_quaternionic(r, j))
                .collect();
            (3, ranks)
        }
    };
    Ok(RankProfile {
        flavor,
        k,
        r,
        ranks,
    })
}

/// Rational homology ranks `b_0..b_d` of the target manifold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiVector {
    betti: Vec<u64>,
}

impl BettiVector {
    pub fn new(betti: Vec<u64>) -> Self {
        assert!(!betti.is_empty(), "Betti vector needs at least b_0");
        Self { betti }
    }

    pub fn dimension(&self) -> u32 {
        (self.betti.len() - 1) as u32
    }

    pub fn betti(&self) -> &[u64] {
        &self.betti
    }

    /// Parse the JSON interchange form `{"dimension": d, "betti": [b0..bd]}`.
    pub fn from_json_str(s: &str) -> Result<Self, RankError> {
        #[derive(Deserialize)]
        struct Raw {
            dimension: u32,
            betti: Vec<u64>,
        }
        let raw: Raw =
            serde_json::from_str(s).map_err(|e| RankError::BettiFormat(e.to_string()))?;
        if raw.betti.len() != raw.dimension as usize + 1 {
            return Err(RankError::BettiFormat(format!(
                "dimension {} needs {} entries, got {}",
                raw.dimension,
                raw.dimension + 1,
                raw.betti.len()
            )));
        }
        Ok(Self::new(raw.betti))
    }
}

/// Rank of the cobordism group of the target with the given Betti vector:
/// `sum_{j >= 1} b_j * rk pi_j`. The `j = 0` term is excluded.
pub fn cobordism_rank(profile: &RankProfile, betti: &BettiVector) -> Result<u64, RankError> {
    if betti.dimension() > profile.max_degree() {
        return Err(RankError::DimensionMismatch {
            betti: betti.dimension(),
            profile: profile.max_degree(),
        });
    }
    Ok((1..=betti.dimension())
        .map(|j| betti.betti()[j as usize] * profile.rank(j))
        .sum())
}

fn corollary_term(num: i64, t: u32) -> BigInt {
    BigInt::from(count_bounded_partitions(&PartitionQuery::ratio(num, 4, t)))
}

/// The closed partition formula for `rk pi_j`, evaluated verbatim. For odd
/// `k` the value may be negative and is returned as-is; see
/// [`corollary_compare`] for the diff against the chain-level ranks.
pub fn corollary_eval(k: u32, r: u32, j: u32) -> BigInt {
    assert!(k >= 1, "codimension must be positive");
    let (k_i, r_i, j_i) = (i64::from(k), i64::from(r), i64::from(j));
    let block = (r_i + 2) * (k_i + 1);
    if k % 2 == 1 {
        let t = (k - 1) / 2;
        corollary_term(j_i - k_i, t) + corollary_term(j_i - 2 * k_i - 1, t)
            - corollary_term(j_i + 1 - block, t)
            + corollary_term(j_i - k_i - block, t)
    } else {
        let t = k / 2;
        corollary_term(j_i - k_i, t) + corollary_term(j_i + 2 - block, t)
    }
}

/// One degree of the comparator: the chain-level value, the closed-formula
/// value, and whether they agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparatorRow {
    pub j: u32,
    pub derived: u64,
    pub printed: String,
    pub agree: bool,
}

/// Per-degree diff of [`corollary_eval`] against [`rank_pi_oriented`].
/// Disagreement is reported data, never an error.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparatorReport {
    pub k: u32,
    pub r: u32,
    pub max_degree: u32,
    pub rows: Vec<ComparatorRow>,
    pub disagreement_count: u32,
    pub first_disagreement: Option<u32>,
}

pub fn corollary_compare(k: u32, r: u32, max_degree: u32) -> ComparatorReport {
    assert!(max_degree >= 1);
    let mut rows = Vec::with_capacity(max_degree as usize);
    let mut disagreement_count = 0;
    let mut first_disagreement = None;
    for j in 1..=max_degree {
        let derived = rank_pi_oriented(k, r, j);
        let printed = corollary_eval(k, r, j);
        let agree = printed == BigInt::from(derived);
        if !agree {
            disagreement_count += 1;
            first_disagreement.get_or_insert(j);
        }
        rows.push(ComparatorRow {
            j,
            derived,
            printed: printed.to_string(),
            agree,
        });
    }
    ComparatorReport {
        k,
        r,
        max_degree,
        rows,
        disagreement_count,
        first_disagreement,
    }
}

impl ComparatorReport {
    /// Aligned-column text rendering with the same numbers as the JSON form.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "closed-formula comparison: k={} r={} degrees 1..={}",
            self.k, self.r, self.max_degree
        );
        let width = self
            .rows
            .iter()
            .map(|row| row.printed.len())
            .max()
            .unwrap_or(1)
            .max("printed".len());
        let _ = writeln!(
            out,
            "{:>4}  {:>8}  {:>width$}  agree",
            "j", "derived", "printed"
        );
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{:>4}  {:>8}  {:>width$}  {}",
                row.j,
                row.derived,
                row.printed,
                if row.agree { "yes" } else { "NO" }
            );
        }
        match self.first_disagreement {
            Some(j) => {
                let _ = writeln!(
                    out,
                    "{} disagreement(s); first at j={j}",
                    self.disagreement_count
                );
            }
            None => {
                let _ = writeln!(out, "0 disagreements");
            }
        }
        out
    }
}
