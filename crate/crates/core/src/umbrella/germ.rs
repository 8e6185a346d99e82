//! The Whitney-umbrella normal form and its embedding lift.
//!
//! The map `R^4 -> R^7` sends `(x, t1, t2, t3)` to
//! `(y, z) = (t1, t2, t3, t1 x, t2 x, t3 x, x^2)`; appending `z5 = x`
//! lifts it to an embedding into `R^8`. A second germ with `z4 = x^3`
//! replaces the fold direction by a degenerate cubic and serves as the
//! negative control for the singularity-type detectors.

use num_rational::BigRational;
use num_traits::Zero;

use super::linalg::ExactScalar;

/// Which normal form to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Germ {
    /// `z4 = x^2`: the cross-cap.
    CrossCap,
    /// `z4 = x^3`: degenerate probe, not a stable map germ.
    CubicControl,
}

impl Germ {
    fn z4_exponent(self) -> u32 {
        match self {
            Germ::CrossCap => 2,
            Germ::CubicControl => 3,
        }
    }
}

/// Exact source point `(x, t1, t2, t3)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourcePoint {
    pub x: BigRational,
    pub t: [BigRational; 3],
}

impl SourcePoint {
    pub fn new(x: BigRational, t: [BigRational; 3]) -> Self {
        Self { x, t }
    }

    pub fn origin() -> Self {
        Self::from_integers(0, [0, 0, 0])
    }

    pub fn from_integers(x: i64, t: [i64; 3]) -> Self {
        Self {
            x: BigRational::from_integer(x.into()),
            t: t.map(|v| BigRational::from_integer(v.into())),
        }
    }

    pub fn is_origin(&self) -> bool {
        self.x.is_zero() && self.t.iter().all(|v| v.is_zero())
    }

    pub fn coords(&self) -> [BigRational; 4] {
        [
            self.x.clone(),
            self.t[0].clone(),
            self.t[1].clone(),
            self.t[2].clone(),
        ]
    }

    /// Canonical text form `x;t1;t2;t3` used in reports.
    pub fn display(&self) -> String {
        format!("{};{};{};{}", self.x, self.t[0], self.t[1], self.t[2])
    }
}

/// Image point `(y1, y2, y3, z1, z2, z3, z4)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetPoint7(pub [BigRational; 7]);

/// Lifted image point `(y1, y2, y3, z1, z2, z3, z4, z5)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetPoint8(pub [BigRational; 8]);

fn power<S: ExactScalar>(base: &S, exponent: u32) -> S {
    let mut out = S::one();
    for _ in 0..exponent {
        out = out * base.clone();
    }
    out
}

/// The lifted normal form at a generic scalar point `(x, t1, t2, t3)`.
pub fn lift_coords<S: ExactScalar>(germ: Germ, p: &[S; 4]) -> [S; 8] {
    let (x, t) = (&p[0], &p[1..4]);
    [
        t[0].clone(),
        t[1].clone(),
        t[2].clone(),
        t[0].clone() * x.clone(),
        t[1].clone() * x.clone(),
        t[2].clone() * x.clone(),
        power(x, germ.z4_exponent()),
        x.clone(),
    ]
}

/// Jacobian of the lifted normal form: 8 rows (target coordinates) by
/// 4 columns (d/dx, d/dt1, d/dt2, d/dt3).
pub fn lift_jacobian<S: ExactScalar>(germ: Germ, p: &[S; 4]) -> Vec<Vec<S>> {
    let (x, t) = (&p[0], &p[1..4]);
    let e = germ.z4_exponent();
    // d(x^e)/dx = e * x^(e-1)
    let mut dz4 = power(x, e - 1);
    for _ in 1..e {
        dz4 = dz4 + power(x, e - 1);
    }
    let zero = S::zero;
    let one = S::one;
    vec![
        vec![zero(), one(), zero(), zero()],
        vec![zero(), zero(), one(), zero()],
        vec![zero(), zero(), zero(), one()],
        vec![t[0].clone(), x.clone(), zero(), zero()],
        vec![t[1].clone(), zero(), x.clone(), zero()],
        vec![t[2].clone(), zero(), zero(), x.clone()],
        vec![dz4, zero(), zero(), zero()],
        vec![one(), zero(), zero(), zero()],
    ]
}

/// Jacobian of the unlifted map: the first 7 rows of [`lift_jacobian`].
pub fn map_jacobian<S: ExactScalar>(germ: Germ, p: &[S; 4]) -> Vec<Vec<S>> {
    let mut j = lift_jacobian(germ, p);
    j.truncate(7);
    j
}

/// The cross-cap normal form `U(p)`.
pub fn umbrella_map(p: &SourcePoint) -> TargetPoint7 {
    let coords = lift_coords(Germ::CrossCap, &p.coords());
    let [y1, y2, y3, z1, z2, z3, z4, _] = coords;
    TargetPoint7([y1, y2, y3, z1, z2, z3, z4])
}

/// The embedding lift of the cross-cap.
pub fn lift_map(p: &SourcePoint) -> TargetPoint8 {
    TargetPoint8(lift_coords(Germ::CrossCap, &p.coords()))
}

/// Inverse of the lift on its image: `(y, z5)` recovers `(t, x)`.
pub fn invert_lift(target: &TargetPoint8) -> SourcePoint {
    let c = &target.0;
    SourcePoint::new(c[7].clone(), [c[0].clone(), c[1].clone(), c[2].clone()])
}

/// Squared Euclidean norm of the unlifted image, exact.
pub fn image_norm_squared(p: &SourcePoint) -> BigRational {
    umbrella_map(p).0.iter().map(|c| c * c).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn origin_maps_to_origin() {
        let image = umbrella_map(&SourcePoint::origin());
        assert!(image.0.iter().all(|c| c.is_zero()));
        let lifted = lift_map(&SourcePoint::origin());
        assert!(lifted.0.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn direct_substitution() {
        let p = SourcePoint::from_integers(1, [1, 0, 0]);
        assert_eq!(
            umbrella_map(&p).0,
            [qi(1), qi(0), qi(0), qi(1), qi(0), qi(0), qi(1)]
        );
        assert_eq!(
            lift_map(&p).0,
            [qi(1), qi(0), qi(0), qi(1), qi(0), qi(0), qi(1), qi(1)]
        );

        let p = SourcePoint::from_integers(-1, [0, 2, 0]);
        assert_eq!(
            umbrella_map(&p).0,
            [qi(0), qi(2), qi(0), qi(0), qi(-2), qi(0), qi(1)]
        );
    }

    #[test]
    fn lift_inverts_exactly() {
        for (x, t) in [(0, [0, 0, 0]), (1, [1, 0, 0]), (-3, [2, 5, -7])] {
            let p = SourcePoint::from_integers(x, t);
            assert_eq!(invert_lift(&lift_map(&p)), p);
        }
    }

    #[test]
    fn cubic_control_changes_only_z4() {
        let p = SourcePoint::from_integers(2, [1, 1, 1]).coords();
        let cross = lift_coords(Germ::CrossCap, &p);
        let cubic = lift_coords(Germ::CubicControl, &p);
        assert_eq!(cross[6], qi(4));
        assert_eq!(cubic[6], qi(8));
        for i in [0usize, 1, 2, 3, 4, 5, 7] {
            assert_eq!(cross[i], cubic[i]);
        }
    }

    #[test]
    fn jacobian_derivative_entries() {
        let p = SourcePoint::from_integers(3, [4, 5, 6]).coords();
        let j = lift_jacobian(Germ::CrossCap, &p);
        assert_eq!(j[6][0], qi(6)); // d(x^2)/dx = 2x
        assert_eq!(j[3][0], qi(4)); // d(t1 x)/dx = t1
        assert_eq!(j[3][1], qi(3)); // d(t1 x)/dt1 = x
        assert_eq!(j[7][0], qi(1)); // d(z5)/dx
        let jc = lift_jacobian(Germ::CubicControl, &p);
        assert_eq!(jc[6][0], qi(27)); // d(x^3)/dx = 3x^2
    }
}
