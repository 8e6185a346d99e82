//! Rational Poincaré series: graded ranks of free polynomial rings, of
//! `H_*(BSO(n); Q)`, of complex and quaternionic projective spaces, and of
//! Thom spaces via the degree shift by the bundle rank.
//!
//! Only ranks are tracked. Torsion is deliberately dropped: every formula
//! downstream is a rational computation. Series are plain truncated rank
//! vectors, immutable once built.

use serde::Serialize;
use thiserror::Error;

/// Default truncation degree for series built by the CLI.
pub const DEFAULT_TRUNCATION: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PoincareError {
    #[error("BSO(n) series requires n >= 2, got n = {0}")]
    RankTooSmall(u32),
}

/// Degrees of the free polynomial generators of a graded ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    degrees: Vec<u32>,
}

impl GeneratorSet {
    /// Multiset of generator degrees; all must be >= 1.
    pub fn new(mut degrees: Vec<u32>) -> Self {
        assert!(
            degrees.iter().all(|&d| d >= 1),
            "generator degrees must be >= 1"
        );
        degrees.sort_unstable();
        Self { degrees }
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }
}

/// Graded ranks of a polynomial ring, indexed 0..=truncation_degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoincareSeries {
    ranks: Vec<u64>,
}

/// Graded ranks of a finite (or stable) cell complex, indexed
/// 0..=truncation_degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellComplexSeries {
    ranks: Vec<u64>,
}

macro_rules! series_accessors {
    ($ty:ident) => {
        impl $ty {
            pub fn truncation_degree(&self) -> u32 {
                (self.ranks.len() - 1) as u32
            }

            /// Rank in degree `d`; degrees below zero are zero, degrees past
            /// the truncation are unknown and panic.
            pub fn rank(&self, d: i64) -> u64 {
                if d < 0 {
                    return 0;
                }
                let d = d as usize;
                assert!(
                    d < self.ranks.len(),
                    "degree {d} past truncation {}",
                    self.ranks.len() - 1
                );
                self.ranks[d]
            }

            pub fn ranks(&self) -> &[u64] {
                &self.ranks
            }

            pub fn total_rank_through(&self, d: u32) -> u64 {
                self.ranks[..=(d as usize)].iter().sum()
            }
        }
    };
}

series_accessors!(PoincareSeries);
series_accessors!(CellComplexSeries);

/// Series of the free commutative ring on `g`: `ranks[d]` counts monomials
/// of total degree `d`, i.e. the coefficients of `prod_i 1/(1 - x^{d_i})`
/// truncated at `max_degree`.
pub fn series_from_generators(g: &GeneratorSet, max_degree: u32) -> PoincareSeries {
    let len = max_degree as usize + 1;
    let mut ranks = vec![0u64; len];
    ranks[0] = 1;
    for &deg in g.degrees() {
        let deg = deg as usize;
        for d in deg..len {
            ranks[d] = ranks[d]
                .checked_add(ranks[d - deg])
                .expect("rank overflow; truncate lower");
        }
    }
    PoincareSeries { ranks }
}

/// Generator degrees of `H^*(BSO(n); Q)`: Pontryagin classes in degrees
/// `4, 8, ...`, plus the Euler class in degree `n` when `n` is even (its
/// square plays the role of the top Pontryagin class).
pub fn bso_generator_degrees(n: u32) -> Result<Vec<u32>, PoincareError> {
    if n < 2 {
        return Err(PoincareError::RankTooSmall(n));
    }
    let mut degrees = Vec::new();
    if n.is_multiple_of(2) {
        let m = n / 2;
        degrees.extend((1..m).map(|i| 4 * i));
        degrees.push(2 * m);
    } else {
        let m = (n - 1) / 2;
        degrees.extend((1..=m).map(|i| 4 * i));
    }
    Ok(degrees)
}

/// Poincaré series of `H_*(BSO(n); Q)` up to `max_degree`.
pub fn bso_series(n: u32, max_degree: u32) -> Result<PoincareSeries, PoincareError> {
    let degrees = bso_generator_degrees(n)?;
    Ok(series_from_generators(
        &GeneratorSet::new(degrees),
        max_degree,
    ))
}

/// Thom isomorphism on ranks: shift every degree up by the real rank of the
/// bundle. `shift` must not exceed the truncation degree.
pub fn thom_shift(s: &PoincareSeries, shift: u32) -> PoincareSeries {
    assert!(
        shift <= s.truncation_degree(),
        "shift {shift} exceeds truncation {}",
        s.truncation_degree()
    );
    let mut ranks = vec![0u64; s.ranks.len()];
    for d in (shift as usize)..s.ranks.len() {
        ranks[d] = s.ranks[d - shift as usize];
    }
    PoincareSeries { ranks }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectiveKind {
    Complex,
    Quaternionic,
}

impl ProjectiveKind {
    /// Width of the cell spacing: 2 for complex, 4 for quaternionic.
    pub fn cell_step(self) -> u32 {
        match self {
            ProjectiveKind::Complex => 2,
            ProjectiveKind::Quaternionic => 4,
        }
    }
}

/// Homology ranks of `CP^m` or `HP^m` (`cells = None` for the infinite
/// projective space): rank 1 at degrees `0, c, 2c, ..., mc`, capped at
/// `max_degree`, zero elsewhere.
pub fn projective_space_series(
    kind: ProjectiveKind,
    cells: Option<u32>,
    max_degree: u32,
) -> CellComplexSeries {
    let step = kind.cell_step() as usize;
    let mut ranks = vec![0u64; max_degree as usize + 1];
    let mut d = 0usize;
    let mut i = 0u32;
    while d < ranks.len() {
        if let Some(m) = cells {
            if i > m {
                break;
            }
        }
        ranks[d] = 1;
        d += step;
        i += 1;
    }
    CellComplexSeries { ranks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Brute-force monomial counter: enumerates exponent vectors directly.
    fn monomial_count(degrees: &[u32], d: u32) -> u64 {
        fn go(degrees: &[u32], remaining: u32) -> u64 {
            match degrees.split_first() {
                None => u64::from(remaining == 0),
                Some((&first, rest)) => {
                    let mut total = 0;
                    let mut used = 0;
                    while used <= remaining {
                        total += go(rest, remaining - used);
                        used += first;
                        if first == 0 {
                            break;
                        }
                    }
                    total
                }
            }
        }
        go(degrees, d)
    }

    #[test]
    fn single_degree_two_generator() {
        let s = series_from_generators(&GeneratorSet::new(vec![2]), 6);
        assert_eq!(s.ranks(), &[1, 0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn ground_field_only() {
        let s = series_from_generators(&GeneratorSet::new(vec![]), 3);
        assert_eq!(s.ranks(), &[1, 0, 0, 0]);
    }

    #[test]
    fn two_generators_of_degree_four() {
        let s = series_from_generators(&GeneratorSet::new(vec![4, 4]), 8);
        assert_eq!(s.rank(8), 3); // a^2, ab, b^2
    }

    #[test]
    fn bso_two_is_one_even_generator() {
        let s = bso_series(2, 6).unwrap();
        for d in 0..=6i64 {
            assert_eq!(s.rank(d), u64::from(d % 2 == 0), "degree {d}");
        }
    }

    #[test]
    fn bso_three_is_one_degree_four_generator() {
        let s = bso_series(3, 12).unwrap();
        for d in 0..=12i64 {
            assert_eq!(s.rank(d), u64::from(d % 4 == 0), "degree {d}");
        }
    }

    #[test]
    fn bso_four_rank_three_in_degree_eight() {
        let s = bso_series(4, 8).unwrap();
        assert_eq!(s.rank(8), 3); // p1^2, p1 e, e^2
    }

    #[test]
    fn bso_rejects_small_rank() {
        assert_eq!(bso_series(1, 4), Err(PoincareError::RankTooSmall(1)));
        assert_eq!(bso_series(0, 4), Err(PoincareError::RankTooSmall(0)));
    }

    #[test]
    fn thom_shift_examples() {
        let s = bso_series(2, 20).unwrap();
        assert_eq!(thom_shift(&s, 0), s);
        let shifted = thom_shift(&s, 2);
        for d in 0..=20i64 {
            assert_eq!(
                shifted.rank(d),
                u64::from(d >= 2 && d % 2 == 0),
                "degree {d}"
            );
        }
        let s3 = thom_shift(&bso_series(3, 23).unwrap(), 3);
        for d in 0..=23i64 {
            assert_eq!(
                s3.rank(d),
                u64::from(d >= 3 && (d - 3) % 4 == 0),
                "degree {d}"
            );
        }
    }

    #[test]
    fn euler_class_decomposition_of_bso_even() {
        // H_*(BSO(2m)) as a module: Q[p_1..p_{m-1}] tensored with the basis
        // {1, e, e^2, ...}, i.e. the Pontryagin-only series summed over
        // degree offsets 0, 2m, 4m, ...
        for m in 1..=4u32 {
            let full = bso_series(2 * m, 40).unwrap();
            let ponts = GeneratorSet::new((1..m).map(|i| 4 * i).collect());
            let p_series = series_from_generators(&ponts, 40);
            for d in 0..=40i64 {
                let mut expected = 0u64;
                let mut offset = 0i64;
                while offset <= d {
                    expected += p_series.rank(d - offset);
                    offset += 2 * m as i64;
                }
                assert_eq!(full.rank(d), expected, "m={m}, degree {d}");
            }
        }
    }

    #[test]
    fn projective_examples() {
        let hp2 = projective_space_series(ProjectiveKind::Quaternionic, Some(2), 12);
        assert_eq!(hp2.ranks(), &[1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0]);
        let cp0 = projective_space_series(ProjectiveKind::Complex, Some(0), 5);
        assert_eq!(cp0.ranks(), &[1, 0, 0, 0, 0, 0]);
        let hp_inf = projective_space_series(ProjectiveKind::Quaternionic, None, 13);
        let nonzero: Vec<usize> = (0..=13).filter(|&d| hp_inf.rank(d as i64) != 0).collect();
        assert_eq!(nonzero, vec![0, 4, 8, 12]);
    }

    proptest! {
        #[test]
        fn series_matches_monomial_enumeration(
            degrees in proptest::collection::vec(1u32..=8, 0..=4),
            max_degree in 0u32..=24,
        ) {
            let s = series_from_generators(&GeneratorSet::new(degrees.clone()), max_degree);
            for d in 0..=max_degree {
                prop_assert_eq!(s.rank(d as i64), monomial_count(&degrees, d));
            }
        }

        #[test]
        fn thom_shift_preserves_total_rank(n in 2u32..=7, shift in 0u32..=10) {
            let s = bso_series(n, 30).unwrap();
            let shifted = thom_shift(&s, shift);
            prop_assert_eq!(
                shifted.total_rank_through(30),
                s.total_rank_through(30 - shift)
            );
        }
    }
}
