//! Bounded partition counting.
//!
//! `p_{<=t}(m)` is the number of multisets of integers in `[1, t]` summing
//! to `m`, with the convention that `p_{<=t}(m) = 0` whenever `m` is not a
//! nonnegative integer. Queries carry `m` as an exact rational because the
//! rank formulas plug in expressions like `(j - k)/4`; the
//! non-integer-to-zero rule lives here, not in the callers.
//!
//! - [`count_bounded_partitions`]: dynamic program over (part bound,
//!   remaining sum), exact big-integer counts.
//! - [`enumerate_bounded_partitions`]: lists every partition; the
//!   brute-force oracle the counter is tested against.
//!
//! All functions are pure; there is no shared memo table, so concurrent
//! calls are trivially independent.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Largest `m` the counting DP accepts. The table is O(m) big integers;
/// anything past this bound is a caller bug, not a use case.
pub const MAX_COUNT_ARG: u64 = 10_000;

/// Largest `m` the exhaustive enumerator accepts.
pub const MAX_ENUMERATION_ARG: u64 = 60;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("enumeration rejects m = {m}: limit is m <= {limit}")]
    EnumerationTooLarge { m: u64, limit: u64 },
}

/// A bounded-partition query: partitions of `m` into parts in `[1, t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionQuery {
    /// Target sum; any exact rational. Non-integral or negative values
    /// count zero partitions.
    pub m: BigRational,
    /// Largest allowed part.
    pub t: u32,
}

impl PartitionQuery {
    pub fn new(m: BigRational, t: u32) -> Self {
        Self { m, t }
    }

    /// Query with an integer target sum.
    pub fn integer(m: i64, t: u32) -> Self {
        Self::new(BigRational::from_integer(m.into()), t)
    }

    /// Query with target sum `num/den`. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64, t: u32) -> Self {
        Self::new(BigRational::new(num.into(), den.into()), t)
    }
}

/// Number of partitions of `q.m` into positive integers in `[1, q.t]`.
///
/// Returns 0 for non-integral or negative `m`; returns 1 for `m = 0` (the
/// empty partition). Exact for arbitrary sizes within [`MAX_COUNT_ARG`].
pub fn count_bounded_partitions(q: &PartitionQuery) -> BigUint {
    if !q.m.is_integer() || q.m.is_negative() {
        return BigUint::zero();
    }
    let m =
        q.m.to_integer()
            .to_u64()
            .unwrap_or_else(|| panic!("partition argument exceeds u64: {}", q.m));
    assert!(
        m <= MAX_COUNT_ARG,
        "partition argument m = {m} exceeds the configured cap {MAX_COUNT_ARG}"
    );
    let m = m as usize;

    // ways[s] = number of partitions of s into parts <= current bound.
    let mut ways = vec![BigUint::zero(); m + 1];
    ways[0] = BigUint::one();
    for part in 1..=(q.t as usize) {
        if part > m {
            break;
        }
        for s in part..=m {
            let prev = ways[s - part].clone();
            ways[s] += prev;
        }
    }
    ways[m].clone()
}

/// Every partition of `m` into parts in `[1, t]`, as nonincreasing part
/// sequences, ordered lexicographically descending.
pub fn enumerate_bounded_partitions(m: u64, t: u32) -> Result<Vec<Vec<u32>>, PartitionError> {
    if m > MAX_ENUMERATION_ARG {
        return Err(PartitionError::EnumerationTooLarge {
            m,
            limit: MAX_ENUMERATION_ARG,
        });
    }
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    extend(m as u32, t, &mut prefix, &mut out);
    Ok(out)
}

fn extend(remaining: u32, bound: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if remaining == 0 {
        out.push(prefix.clone());
        return;
    }
    let largest = prefix.last().copied().unwrap_or(bound).min(remaining);
    for part in (1..=largest).rev() {
        prefix.push(part);
        extend(remaining - part, bound, prefix, out);
        prefix.pop();
    }
}
