//! Deterministic quaternionic framing of the lift's normal bundle.
//!
//! Away from the origin the normal space of the embedded lift is
//! four-dimensional and carries a quaternionic structure fixed once and
//! for all by a deterministic recipe: project the coordinate directions
//! `z1, z2, z3, z4` into the normal space, Gram-Schmidt them in that order
//! (exact arithmetic, unnormalized), and label the resulting orthogonal
//! basis `1, i, j, k`. The frame is then `(v, iv, jv, kv)` where `v` is
//! the normal section at the point.
//!
//! These four seeds stay independent at every source point: a normal
//! vector orthogonal to all of them has zero `z1..z4` coordinates, the
//! tangency against the `t`-columns then kills its `y` coordinates, and
//! tangency against the `x`-column kills `z5`. Seeding with the last four
//! coordinates instead would degenerate on the whole hyperplane `t1 = 0`.
//!
//! Unit normalization needs square roots, so the frame keeps the exact
//! unnormalized data (used for every zero/orthogonality decision) plus
//! `f64` unit vectors whose orthonormality is only reported against a
//! tolerance.

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::germ::{lift_jacobian, Germ, SourcePoint};
use super::linalg::{dot, is_zero_vector};
use super::section::{normal_projection, section_s1};

/// Default tolerance for reporting orthonormality of the normalized frame.
pub const DEFAULT_FRAME_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrameError {
    #[error("the frame is undefined at the origin (the singular point)")]
    Origin,
    #[error("degenerate seed projections at {point}: Gram-Schmidt produced a zero vector")]
    DegenerateSeeds { point: String },
    #[error(
        "frame at {point} misses orthonormality: deviation {deviation} > tolerance {tolerance}"
    )]
    ToleranceExceeded {
        point: String,
        deviation: f64,
        tolerance: f64,
    },
}

/// The framing data at one point of the lift.
#[derive(Clone, Debug)]
pub struct NormalFrame {
    pub base: SourcePoint,
    /// Exact, unnormalized normal section; first frame vector direction.
    pub v_raw: [BigRational; 8],
    /// Exact orthogonal basis of the normal space from the seeded
    /// Gram-Schmidt, in `1, i, j, k` order.
    pub basis_raw: [Vec<BigRational>; 4],
    /// Normalized frame `(v, iv, jv, kv)` in `f64`.
    pub vectors: [[f64; 8]; 4],
    /// Largest deviation from exact orthonormality among the normalized
    /// vectors.
    pub max_deviation: f64,
    pub tolerance: f64,
}

fn to_f64(v: &[BigRational]) -> Vec<f64> {
    v.iter()
        .map(|x| x.to_f64().expect("rational fits in f64"))
        .collect()
}

/// Quaternion left multiplication by `i`, `j`, `k` on coordinates
/// `(a, b, c, d) = a + bi + cj + dk`.
fn quaternion_actions(q: [f64; 4]) -> [[f64; 4]; 4] {
    let [a, b, c, d] = q;
    [
        [a, b, c, d],   // 1 * q
        [-b, a, -d, c], // i * q
        [-c, d, a, -b], // j * q
        [-d, -c, b, a], // k * q
    ]
}

/// Build the deterministic frame at `p` (not the origin) with the given
/// orthonormality reporting tolerance.
pub fn framing_frame(p: &SourcePoint, tolerance: f64) -> Result<NormalFrame, FrameError> {
    if p.is_origin() {
        return Err(FrameError::Origin);
    }
    let coords = p.coords();
    let j = lift_jacobian(Germ::CrossCap, &coords);

    // Exact seed projections of the z1..z4 axes into the normal space.
    let mut seeds = Vec::with_capacity(4);
    for axis in 3..7 {
        let mut w = vec![BigRational::zero(); 8];
        w[axis] = num_traits::One::one();
        let projected =
            normal_projection(&j, &w).expect("lifted Jacobian has full column rank everywhere");
        seeds.push(projected);
    }

    // Exact Gram-Schmidt, unnormalized.
    let mut basis: Vec<Vec<BigRational>> = Vec::with_capacity(4);
    for seed in seeds {
        let mut b = seed;
        for prev in &basis {
            let coeff = dot(&b, prev) / dot(prev, prev);
            for (bi, pi) in b.iter_mut().zip(prev) {
                *bi = &*bi - &coeff * pi;
            }
        }
        if is_zero_vector(&b) {
            return Err(FrameError::DegenerateSeeds { point: p.display() });
        }
        basis.push(b);
    }

    // Consistency: every basis vector is exactly normal to the tangent
    // columns.
    for b in &basis {
        for col in 0..4 {
            let column: Vec<BigRational> = j.iter().map(|row| row[col].clone()).collect();
            assert!(dot(&column, b).is_zero(), "basis not exactly normal");
        }
    }

    let v_raw = section_s1(p);
    assert!(
        !is_zero_vector(&v_raw),
        "normal section vanishes away from the origin only at singular points"
    );

    // Orthonormalize in f64 and express v in quaternion coordinates.
    let unit_basis: Vec<Vec<f64>> = basis
        .iter()
        .map(|b| {
            let bf = to_f64(b);
            let norm = bf.iter().map(|x| x * x).sum::<f64>().sqrt();
            bf.iter().map(|x| x / norm).collect()
        })
        .collect();
    let vf = to_f64(&v_raw);
    let mut q = [0f64; 4];
    for (i, e) in unit_basis.iter().enumerate() {
        q[i] = vf.iter().zip(e).map(|(a, b)| a * b).sum();
    }
    let q_norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let q = q.map(|x| x / q_norm);

    let mut vectors = [[0f64; 8]; 4];
    for (slot, action) in quaternion_actions(q).into_iter().enumerate() {
        for (i, e) in unit_basis.iter().enumerate() {
            for (out, ei) in vectors[slot].iter_mut().zip(e) {
                *out += action[i] * ei;
            }
        }
    }

    // Orthonormality deviation of the finished frame.
    let mut max_deviation = 0f64;
    for a in 0..4 {
        for b in a..4 {
            let inner: f64 = vectors[a].iter().zip(&vectors[b]).map(|(x, y)| x * y).sum();
            let expected = if a == b { 1.0 } else { 0.0 };
            max_deviation = max_deviation.max((inner - expected).abs());
        }
    }
    if max_deviation > tolerance {
        return Err(FrameError::ToleranceExceeded {
            point: p.display(),
            deviation: max_deviation,
            tolerance,
        });
    }

    let basis_raw: [Vec<BigRational>; 4] = basis.try_into().expect("four basis vectors");
    Ok(NormalFrame {
        base: p.clone(),
        v_raw,
        basis_raw,
        vectors,
        max_deviation,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::umbrella::germ::lift_jacobian;

    #[test]
    fn origin_is_rejected() {
        assert!(matches!(
            framing_frame(&SourcePoint::origin(), DEFAULT_FRAME_TOLERANCE),
            Err(FrameError::Origin)
        ));
    }

    #[test]
    fn frame_at_a_simple_point() {
        let p = SourcePoint::from_integers(1, [0, 0, 0]);
        let frame = framing_frame(&p, DEFAULT_FRAME_TOLERANCE).unwrap();

        // First frame vector is parallel to the normal section.
        let vf: Vec<f64> = frame.v_raw.iter().map(|x| x.to_f64().unwrap()).collect();
        let norm = vf.iter().map(|x| x * x).sum::<f64>().sqrt();
        for (a, b) in frame.vectors[0].iter().zip(&vf) {
            assert!((a - b / norm).abs() < 1e-12);
        }
        assert!(frame.max_deviation <= DEFAULT_FRAME_TOLERANCE);
    }

    #[test]
    fn v_raw_is_exactly_normal() {
        for (x, t) in [(1, [0, 0, 0]), (1, [2, 0, -1]), (-2, [1, 1, 1])] {
            let p = SourcePoint::from_integers(x, t);
            let frame = framing_frame(&p, DEFAULT_FRAME_TOLERANCE).unwrap();
            let j = lift_jacobian(Germ::CrossCap, &p.coords());
            for col in 0..4 {
                let column: Vec<BigRational> = j.iter().map(|row| row[col].clone()).collect();
                assert!(dot(&column, &frame.v_raw).is_zero());
            }
        }
    }

    #[test]
    fn frame_vectors_stay_normal_to_the_tangent_space_numerically() {
        let p = SourcePoint::from_integers(2, [3, -1, 5]);
        let frame = framing_frame(&p, DEFAULT_FRAME_TOLERANCE).unwrap();
        let j = lift_jacobian(Germ::CrossCap, &p.coords());
        for col in 0..4 {
            let column: Vec<f64> = j.iter().map(|row| row[col].to_f64().unwrap()).collect();
            let scale = column.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
            for vec in &frame.vectors {
                let inner: f64 = vec.iter().zip(&column).map(|(a, b)| a * b).sum();
                assert!(inner.abs() / scale < 1e-10);
            }
        }
    }
}
