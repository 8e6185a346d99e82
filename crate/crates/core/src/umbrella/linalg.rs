//! Exact linear algebra for the umbrella checks: fraction-free (Bareiss)
//! rank over the integers after clearing denominators, and Gaussian solves
//! generic over exact scalars so the same code runs on rationals and on
//! dual rationals.

use std::ops::Sub;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact commutative arithmetic with a decidable "invertible" predicate.
/// Rationals are a field; dual numbers invert exactly when the real part
/// is nonzero, which is all a pivot needs.
pub trait ExactScalar: Clone + PartialEq + Zero + One + Sub<Output = Self> {
    fn is_invertible(&self) -> bool;
    /// Panics if `other` is not invertible.
    fn exact_div(&self, other: &Self) -> Self;
}

impl ExactScalar for BigRational {
    fn is_invertible(&self) -> bool {
        !self.is_zero()
    }
    fn exact_div(&self, other: &Self) -> Self {
        self / other
    }
}

/// Solve `a x = rhs` for a square invertible `a`, by Gaussian elimination
/// with pivoting on invertible entries. Returns `None` if no invertible
/// pivot can be found (the matrix is singular, or singular "to first
/// order" over duals).
pub fn solve<S: ExactScalar>(a: &[Vec<S>], rhs: &[S]) -> Option<Vec<S>> {
    let n = a.len();
    assert!(a.iter().all(|row| row.len() == n) && rhs.len() == n);
    let mut m: Vec<Vec<S>> = a
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();

    for col in 0..n {
        let pivot_row = (col..n).find(|&r| m[r][col].is_invertible())?;
        m.swap(col, pivot_row);
        let pivot = m[col][col].clone();
        for entry in m[col].iter_mut() {
            *entry = entry.exact_div(&pivot);
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (entry, pivot_entry) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *entry = entry.clone() - factor.clone() * pivot_entry.clone();
            }
        }
    }
    Some(
        m.into_iter()
            .map(|row| row[row.len() - 1].clone())
            .collect(),
    )
}

/// Rank by fraction-free (Bareiss) elimination over machine integers.
/// Returns `None` on overflow so callers can fall back to big integers.
pub fn rank_i128(mut m: Vec<Vec<i128>>) -> Option<usize> {
    let rows = m.len();
    if rows == 0 {
        return Some(0);
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev_pivot: i128 = 1;
    let mut row = 0;
    for col in 0..cols {
        let Some(pivot_row) = (row..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, pivot_row);
        let pivot = m[row][col];
        for r in (row + 1)..rows {
            for c in (col + 1)..cols {
                let lhs = pivot.checked_mul(m[r][c])?;
                let rhs = m[r][col].checked_mul(m[row][c])?;
                m[r][c] = lhs.checked_sub(rhs)? / prev_pivot;
            }
            m[r][col] = 0;
        }
        prev_pivot = pivot;
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    Some(rank)
}

/// Rank by fraction-free (Bareiss) elimination over big integers.
pub fn rank_bigint(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev_pivot = BigInt::one();
    let mut row = 0;
    for col in 0..cols {
        let Some(pivot_row) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pivot_row);
        let pivot = m[row][col].clone();
        for r in (row + 1)..rows {
            for c in (col + 1)..cols {
                let value = (&pivot * &m[r][c] - &m[r][col] * &m[row][c]) / &prev_pivot;
                m[r][c] = value;
            }
            m[r][col] = BigInt::zero();
        }
        prev_pivot = pivot;
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

/// Exact rank of a rational matrix: clear denominators row by row (rank is
/// invariant under row scaling), then run Bareiss over `i128` when the
/// entries fit and over big integers otherwise.
pub fn rational_rank(m: &[Vec<BigRational>]) -> usize {
    let cleared: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();
    let small: Option<Vec<Vec<i128>>> = cleared
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| i128::try_from(x).ok())
                .collect::<Option<Vec<i128>>>()
        })
        .collect();
    if let Some(small) = small {
        if let Some(rank) = rank_i128(small) {
            return rank;
        }
    }
    rank_bigint(cleared)
}

/// Dot product of two exact vectors.
pub fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// True if the vector is exactly zero.
pub fn is_zero_vector(v: &[BigRational]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// One nullspace vector of a matrix with a one-dimensional kernel,
/// normalized so its first nonzero coordinate is 1. Returns `None` if the
/// kernel is trivial; panics if the kernel has dimension above one.
pub fn kernel_vector(m: &[Vec<BigRational>]) -> Option<Vec<BigRational>> {
    let rows = m.len();
    let cols = m[0].len();
    let mut work: Vec<Vec<BigRational>> = m.to_vec();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(pivot_row) = (row..rows).find(|&r| !Zero::is_zero(&work[r][col])) else {
            continue;
        };
        work.swap(row, pivot_row);
        let pivot = work[row][col].clone();
        for entry in work[row].iter_mut() {
            *entry = &*entry / &pivot;
        }
        let pivot_row_values = work[row].clone();
        for (r, work_row) in work.iter_mut().enumerate() {
            if r == row || Zero::is_zero(&work_row[col]) {
                continue;
            }
            let factor = work_row[col].clone();
            for (entry, pivot_entry) in work_row.iter_mut().zip(&pivot_row_values) {
                *entry = &*entry - &factor * pivot_entry;
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    match free_cols.len() {
        0 => None,
        1 => {
            let free = free_cols[0];
            let mut v = vec![BigRational::zero(); cols];
            v[free] = BigRational::one();
            for (i, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -work[i][free].clone();
            }
            let first = v
                .iter()
                .position(|x| !Zero::is_zero(x))
                .expect("kernel vector is nonzero");
            let scale = v[first].clone();
            for entry in v.iter_mut() {
                *entry = &*entry / &scale;
            }
            Some(v)
        }
        d => panic!("kernel dimension {d} > 1; corank-1 assumption violated"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn qi(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn solve_small_system() {
        let a = vec![vec![qi(2), qi(1)], vec![qi(1), qi(3)]];
        let x = solve(&a, &[qi(5), qi(10)]).unwrap();
        assert_eq!(x, vec![qi(1), qi(3)]);
    }

    #[test]
    fn solve_detects_singular() {
        let a = vec![vec![qi(1), qi(2)], vec![qi(2), qi(4)]];
        assert_eq!(solve(&a, &[qi(1), qi(2)]), None);
    }

    #[test]
    fn ranks_agree_between_widths() {
        let m = vec![vec![1i128, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        let big: Vec<Vec<BigInt>> = m
            .iter()
            .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(rank_i128(m).unwrap(), 2);
        assert_eq!(rank_bigint(big), 2);
    }

    #[test]
    fn rational_rank_clears_denominators() {
        let m = vec![
            vec![q(1, 2), q(1, 3)],
            vec![q(3, 2), qi(1)],
            vec![qi(0), q(5, 7)],
        ];
        assert_eq!(rational_rank(&m), 2);
        let dependent = vec![vec![q(1, 2), q(1, 4)], vec![qi(2), qi(1)]];
        assert_eq!(rational_rank(&dependent), 1);
    }

    #[test]
    fn kernel_of_rank_deficient_matrix() {
        // x + 2y + 3z = 0, y + z = 0 -> kernel spanned by (-1, -1, 1).
        let m = vec![vec![qi(1), qi(2), qi(3)], vec![qi(0), qi(1), qi(1)]];
        let v = kernel_vector(&m).unwrap();
        assert_eq!(v, vec![qi(1), qi(1), qi(-1)]);
        for row in &m {
            assert!(dot(row, &v).is_zero());
        }
    }

    #[test]
    fn kernel_of_full_rank_matrix_is_trivial() {
        let m = vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)], vec![qi(1), qi(1)]];
        assert_eq!(kernel_vector(&m), None);
    }
}
