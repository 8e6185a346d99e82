//! Dual rationals `a + b eps` with `eps^2 = 0`: exact forward-mode
//! differentiation. Evaluating a rational expression at `p + eps u` yields
//! its value and its directional derivative along `u` in one pass, with no
//! limits and no floating point.

use std::ops::{Add, Mul, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::linalg::ExactScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dual {
    pub value: BigRational,
    pub deriv: BigRational,
}

impl Dual {
    pub fn constant(value: BigRational) -> Self {
        Self {
            value,
            deriv: BigRational::zero(),
        }
    }

    pub fn variable(value: BigRational, deriv: BigRational) -> Self {
        Self { value, deriv }
    }
}

impl Add for Dual {
    type Output = Self;
    fn add(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            deriv: self.deriv + other.deriv,
        }
    }
}

impl Sub for Dual {
    type Output = Self;
    fn sub(self, other: Self) -> Self {
        Self {
            value: self.value - other.value,
            deriv: self.deriv - other.deriv,
        }
    }
}

impl Mul for Dual {
    type Output = Self;
    fn mul(self, other: Self) -> Self {
        Self {
            deriv: &self.value * &other.deriv + &self.deriv * &other.value,
            value: self.value * other.value,
        }
    }
}

impl Zero for Dual {
    fn zero() -> Self {
        Self::constant(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.deriv.is_zero()
    }
}

impl One for Dual {
    fn one() -> Self {
        Self::constant(BigRational::one())
    }
}

impl ExactScalar for Dual {
    /// `a + b eps` is invertible exactly when `a != 0`.
    fn is_invertible(&self) -> bool {
        !self.value.is_zero()
    }

    fn exact_div(&self, other: &Self) -> Self {
        assert!(other.is_invertible(), "division by a pure-eps dual");
        let value = &self.value / &other.value;
        // (a/c)' = (a' c - a c') / c^2
        let deriv = (&self.deriv * &other.value - &self.value * &other.deriv)
            / (&other.value * &other.value);
        Self { value, deriv }
    }
}
