//! Finitely generated abelian groups stored as free rank plus a multiset of
//! prime-power torsion orders, so odd and even parts separate without any
//! factorization at query time.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::SpecSeqError;

/// A finitely generated abelian group: `Z^free_rank + sum Z_{q}` over the
/// prime powers `q` in `torsion` (kept sorted ascending).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinAbGroup {
    free_rank: u32,
    torsion: Vec<u64>,
}

/// Splits `n` into prime-power factors, smallest prime first.
/// Returns `None` if `n == 0`.
fn prime_power_factors(n: u64) -> Option<Vec<u64>> {
    if n == 0 {
        return None;
    }
    let mut n = n;
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut q = 1u64;
            while n.is_multiple_of(p) {
                q *= p;
                n /= p;
            }
            factors.push(q);
        }
        p += 1;
    }
    if n > 1 {
        factors.push(n);
    }
    Some(factors)
}

fn is_prime_power(q: u64) -> bool {
    q > 1
        && prime_power_factors(q)
            .map(|f| f.len() == 1)
            .unwrap_or(false)
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        Self {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: u32) -> Self {
        Self {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// The cyclic group of order `n >= 1`, decomposed into prime powers.
    pub fn cyclic(n: u64) -> Self {
        let torsion = prime_power_factors(n).expect("cyclic group order must be >= 1");
        Self::from_parts(0, torsion).expect("prime-power factors are prime powers")
    }

    /// Validates that every torsion entry is a prime power > 1.
    pub fn from_parts(free_rank: u32, mut torsion: Vec<u64>) -> Result<Self, SpecSeqError> {
        for &q in &torsion {
            if !is_prime_power(q) {
                return Err(SpecSeqError::NotPrimePower(q));
            }
        }
        torsion.sort_unstable();
        Ok(Self { free_rank, torsion })
    }

    pub fn free_rank(&self) -> u32 {
        self.free_rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order; `None` when the free rank is positive.
    pub fn order(&self) -> Option<BigUint> {
        if self.free_rank > 0 {
            return None;
        }
        let mut order = BigUint::one();
        for &q in &self.torsion {
            order *= BigUint::from(q);
        }
        Some(order)
    }

    /// Order as a u64, for the small groups in the stem tables.
    pub fn order_u64(&self) -> Option<u64> {
        if self.free_rank > 0 {
            return None;
        }
        self.torsion
            .iter()
            .try_fold(1u64, |acc, &q| acc.checked_mul(q))
    }

    /// Total `ell`-adic valuation of the torsion order.
    pub fn ell_valuation(&self, ell: u64) -> u32 {
        self.torsion
            .iter()
            .map(|&q| {
                let mut v = 0;
                let mut q = q;
                while q % ell == 0 {
                    v += 1;
                    q /= ell;
                }
                v
            })
            .sum()
    }

    /// Odd primes dividing the torsion order, ascending.
    pub fn odd_torsion_primes(&self) -> Vec<u64> {
        let mut primes: Vec<u64> = self
            .torsion
            .iter()
            .filter_map(|&q| {
                let p = smallest_prime_factor(q);
                (p != 2).then_some(p)
            })
            .collect();
        primes.sort_unstable();
        primes.dedup();
        primes
    }

    /// Invariant factors, largest first (each divisible by the next).
    pub fn invariant_factors(&self) -> Vec<u64> {
        let mut by_prime: Vec<(u64, Vec<u64>)> = Vec::new();
        for &q in &self.torsion {
            let p = smallest_prime_factor(q);
            match by_prime.iter_mut().find(|(prime, _)| *prime == p) {
                Some((_, powers)) => powers.push(q),
                None => by_prime.push((p, vec![q])),
            }
        }
        for (_, powers) in &mut by_prime {
            powers.sort_unstable_by(|a, b| b.cmp(a));
        }
        let count = by_prime
            .iter()
            .map(|(_, powers)| powers.len())
            .max()
            .unwrap_or(0);
        (0..count)
            .map(|i| {
                by_prime
                    .iter()
                    .filter_map(|(_, powers)| powers.get(i))
                    .product()
            })
            .collect()
    }
}

fn smallest_prime_factor(q: u64) -> u64 {
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            return p;
        }
        p += 1;
    }
    q
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in self.invariant_factors() {
            parts.push(format!("Z_{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}
