//! The singularity-detecting section and the contact-order probes.
//!
//! Projecting the vertical direction `e8` (the added coordinate line)
//! orthogonally onto the complement of the lift's tangent space yields a
//! normal section `s1` whose zero set is exactly the singular locus of the
//! projected map. The second-order probe differentiates `s1` along the
//! kernel direction at a singular point: a nonzero derivative certifies a
//! fold-type point, a vanishing one flags higher contact order (the cubic
//! control germ).

use num_rational::BigRational;
use num_traits::Zero;

use super::dual::Dual;
use super::germ::{lift_jacobian, map_jacobian, Germ, SourcePoint};
use super::linalg::{kernel_vector, rational_rank, solve, ExactScalar};

/// Columns of the transpose times a vector: `J^T w`.
fn transpose_apply<S: ExactScalar>(j: &[Vec<S>], w: &[S]) -> Vec<S> {
    let cols = j[0].len();
    (0..cols)
        .map(|c| {
            j.iter().zip(w).fold(S::zero(), |acc, (row, wi)| {
                acc + row[c].clone() * wi.clone()
            })
        })
        .collect()
}

/// Orthogonal projection of `w` onto the complement of the column space of
/// `j` (full column rank required): `w - J (J^T J)^{-1} J^T w`.
pub fn normal_projection<S: ExactScalar>(j: &[Vec<S>], w: &[S]) -> Option<Vec<S>> {
    let cols = j[0].len();
    let gram: Vec<Vec<S>> = (0..cols)
        .map(|a| {
            (0..cols)
                .map(|b| {
                    j.iter()
                        .fold(S::zero(), |acc, row| acc + row[a].clone() * row[b].clone())
                })
                .collect()
        })
        .collect();
    let rhs = transpose_apply(j, w);
    let coeffs = solve(&gram, &rhs)?;
    Some(
        (0..w.len())
            .map(|i| {
                let fitted = (0..cols).fold(S::zero(), |acc, c| {
                    acc + j[i][c].clone() * coeffs[c].clone()
                });
                w[i].clone() - fitted
            })
            .collect(),
    )
}

fn vertical<S: ExactScalar>() -> Vec<S> {
    let mut w = vec![S::zero(); 8];
    w[7] = S::one();
    w
}

/// `s1` for an arbitrary germ at a generic scalar point.
pub fn section_s1_for<S: ExactScalar>(germ: Germ, p: &[S; 4]) -> Vec<S> {
    let j = lift_jacobian(germ, p);
    normal_projection(&j, &vertical()).expect("lifted Jacobian has full column rank everywhere")
}

/// The section `s1` of the cross-cap lift at an exact rational point.
pub fn section_s1(p: &SourcePoint) -> [BigRational; 8] {
    let v = section_s1_for(Germ::CrossCap, &p.coords());
    v.try_into().expect("eight coordinates")
}

/// Exact rank of the (lifted) Jacobian at `p`, by fraction-free
/// elimination over the integers.
pub fn jacobian_rank(p: &SourcePoint, lifted: bool) -> usize {
    jacobian_rank_for(Germ::CrossCap, p, lifted)
}

pub fn jacobian_rank_for(germ: Germ, p: &SourcePoint, lifted: bool) -> usize {
    let coords = p.coords();
    let j = if lifted {
        lift_jacobian(germ, &coords)
    } else {
        map_jacobian(germ, &coords)
    };
    rational_rank(&j)
}

/// True when `s1(p) = 0`, decided exactly: `e8` lies in the column space
/// of the lifted Jacobian iff appending it does not raise the rank.
pub fn s1_vanishes_for(germ: Germ, p: &SourcePoint) -> bool {
    let coords = p.coords();
    let j = lift_jacobian(germ, &coords);
    let mut augmented = j.clone();
    for (row, w) in augmented.iter_mut().zip(vertical::<BigRational>()) {
        row.push(w);
    }
    rational_rank(&augmented) == rational_rank(&j)
}

/// Kernel direction of the unlifted differential at the origin, normalized
/// so the leading coordinate is 1 (it is the `x`-direction for both germs).
pub fn kernel_direction_at_origin(germ: Germ) -> [BigRational; 4] {
    let origin = SourcePoint::origin().coords();
    let j = map_jacobian(germ, &origin);
    kernel_vector(&j)
        .expect("origin is a corank-1 singular point")
        .try_into()
        .expect("four coordinates")
}

/// Directional derivative of `s1` at the origin along the kernel
/// direction, computed exactly with dual numbers.
pub fn kernel_derivative_of_s1(germ: Germ) -> [BigRational; 8] {
    let u = kernel_direction_at_origin(germ);
    let dual_point: [Dual; 4] = [
        Dual::variable(BigRational::zero(), u[0].clone()),
        Dual::variable(BigRational::zero(), u[1].clone()),
        Dual::variable(BigRational::zero(), u[2].clone()),
        Dual::variable(BigRational::zero(), u[3].clone()),
    ];
    let s1 = section_s1_for(germ, &dual_point);
    for component in &s1 {
        assert!(
            component.value.is_zero(),
            "s1 must vanish at the singular point"
        );
    }
    let derivs: Vec<BigRational> = s1.into_iter().map(|d| d.deriv).collect();
    derivs.try_into().expect("eight coordinates")
}

/// Second-order emptiness check at the cross-cap's singular point: the
/// kernel-directional derivative of `s1` is nonzero there, so the point
/// has contact order exactly one and the deeper singularity stratum is
/// empty.
pub fn sigma2_empty_check() -> bool {
    sigma2_empty_check_for(Germ::CrossCap)
}

/// The same probe for an arbitrary germ; the cubic control returns false.
pub fn sigma2_empty_check_for(germ: Germ) -> bool {
    kernel_derivative_of_s1(germ).iter().any(|c| !c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::umbrella::linalg::{dot, is_zero_vector};

    fn qi(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn qr(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn jacobian_rank_examples() {
        let origin = SourcePoint::origin();
        assert_eq!(jacobian_rank(&origin, false), 3);
        assert_eq!(jacobian_rank(&origin, true), 4);
        let p = SourcePoint::from_integers(1, [0, 0, 0]);
        assert_eq!(jacobian_rank(&p, false), 4);
        assert_eq!(jacobian_rank(&p, true), 4);
    }

    #[test]
    fn section_vanishes_exactly_at_the_origin() {
        assert!(is_zero_vector(&section_s1(&SourcePoint::origin())));
        assert!(s1_vanishes_for(Germ::CrossCap, &SourcePoint::origin()));
        let p = SourcePoint::from_integers(1, [0, 0, 0]);
        assert!(!is_zero_vector(&section_s1(&p)));
        assert!(!s1_vanishes_for(Germ::CrossCap, &p));
    }

    #[test]
    fn section_value_on_the_x_axis() {
        // At (x, 0, 0, 0) the projection works out to
        // (0..0, -2x, 4x^2) / (4x^2 + 1).
        let p = SourcePoint::from_integers(1, [0, 0, 0]);
        let s = section_s1(&p);
        assert_eq!(s[6], qr(-2, 5));
        assert_eq!(s[7], qr(4, 5));
        assert!(s[..6].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn section_is_orthogonal_to_the_tangent_columns() {
        for (x, t) in [(1, [0, 0, 0]), (2, [1, -1, 3]), (-5, [7, 2, 9])] {
            let p = SourcePoint::from_integers(x, t);
            let s = section_s1(&p);
            let j = lift_jacobian(Germ::CrossCap, &p.coords());
            for col in 0..4 {
                let column: Vec<BigRational> = j.iter().map(|row| row[col].clone()).collect();
                assert!(dot(&column, &s).is_zero(), "column {col} at {:?}", (x, t));
            }
        }
    }

    #[test]
    fn kernel_direction_is_the_x_axis() {
        assert_eq!(
            kernel_direction_at_origin(Germ::CrossCap),
            [qi(1), qi(0), qi(0), qi(0)]
        );
        assert_eq!(
            kernel_direction_at_origin(Germ::CubicControl),
            [qi(1), qi(0), qi(0), qi(0)]
        );
    }

    #[test]
    fn fold_point_has_nonzero_kernel_derivative() {
        let d = kernel_derivative_of_s1(Germ::CrossCap);
        assert_eq!(d[6], qi(-2));
        assert!(d[..6].iter().all(|c| c.is_zero()));
        assert!(d[7].is_zero());
        assert!(sigma2_empty_check());
    }

    #[test]
    fn cubic_control_is_detected() {
        let d = kernel_derivative_of_s1(Germ::CubicControl);
        assert!(d.iter().all(|c| c.is_zero()));
        assert!(!sigma2_empty_check_for(Germ::CubicControl));
    }
}
