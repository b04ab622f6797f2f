//! Exact phases: elements of `Q/Z` stored as reduced rationals in `[0, 1)`.
//!
//! A phase `q` stands for the unit complex number `e(q) = exp(2*pi*i*q)`.
//! Addition of phases is multiplication of the corresponding unit complex
//! numbers, so cocycle identities written multiplicatively on `U(1)` become
//! additive identities here and stay exact.

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// An element of `Q/Z`, always reduced with `0 <= value < 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(Rational64);

impl Phase {
    pub const ZERO: Phase = Phase(Rational64::new_raw(0, 1));

    /// One half turn, the generator of the 2-torsion.
    pub const HALF: Phase = Phase(Rational64::new_raw(1, 2));

    /// Builds `num/den mod 1`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Phase {
        assert!(den != 0, "phase denominator must be nonzero");
        Phase(Rational64::new(num, den)).reduced()
    }

    pub fn from_rational(q: Rational64) -> Phase {
        Phase(q).reduced()
    }

    fn reduced(self) -> Phase {
        let mut q = self.0.fract();
        if q.is_negative() {
            q += Rational64::from_integer(1);
        }
        Phase(q)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn as_rational(&self) -> Rational64 {
        self.0
    }

    /// The order of this phase in `Q/Z`, i.e. its reduced denominator.
    pub fn order(&self) -> i64 {
        self.denom()
    }

    /// `e(q) = exp(2 pi i q)` as a complex double.
    pub fn as_complex(&self) -> Complex64 {
        let theta = 2.0 * std::f64::consts::PI * (self.numer() as f64) / (self.denom() as f64);
        Complex64::new(theta.cos(), theta.sin())
    }

    /// Integer multiple `k * q mod 1`.
    pub fn times(&self, k: i64) -> Phase {
        // Reduce k modulo the order first so the numerator cannot overflow.
        let k = k.rem_euclid(self.denom());
        Phase(self.0 * Rational64::from_integer(k)).reduced()
    }

    /// Reduces an arbitrary-precision rational modulo 1. Returns `None` only
    /// if the reduced denominator exceeds machine range.
    pub fn try_from_big(q: &num_rational::BigRational) -> Option<Phase> {
        use num_integer::Integer;
        let den = q.denom().clone();
        let num = q.numer().mod_floor(&den);
        let num: i64 = i64::try_from(&num).ok()?;
        let den: i64 = i64::try_from(&den).ok()?;
        Some(Phase::new(num, den))
    }
}

impl Default for Phase {
    fn default() -> Self {
        Phase::ZERO
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        Phase(self.0 + rhs.0).reduced()
    }
}

impl AddAssign for Phase {
    fn add_assign(&mut self, rhs: Phase) {
        *self = *self + rhs;
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        Phase(self.0 - rhs.0).reduced()
    }
}

impl SubAssign for Phase {
    fn sub_assign(&mut self, rhs: Phase) {
        *self = *self - rhs;
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase(-self.0).reduced()
    }
}

impl Mul<i64> for Phase {
    type Output = Phase;
    fn mul(self, k: i64) -> Phase {
        self.times(k)
    }
}

impl Sum for Phase {
    fn sum<I: Iterator<Item = Phase>>(iter: I) -> Phase {
        iter.fold(Phase::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phase({}/{})", self.numer(), self.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_into_unit_interval() {
        assert_eq!(Phase::new(3, 2), Phase::new(1, 2));
        assert_eq!(Phase::new(-1, 4), Phase::new(3, 4));
        assert_eq!(Phase::new(-7, 3), Phase::new(2, 3));
        assert_eq!(Phase::new(4, 2), Phase::ZERO);
        assert_eq!(Phase::new(2, -4), Phase::new(1, 2));
    }

    #[test]
    fn group_laws() {
        let a = Phase::new(1, 3);
        let b = Phase::new(1, 2);
        let c = Phase::new(5, 7);
        assert_eq!((a + b) + c, a + (b + c));
        assert_eq!(a + b, b + a);
        assert_eq!(a + Phase::ZERO, a);
        assert_eq!(a + (-a), Phase::ZERO);
        assert_eq!(a - b, a + (-b));
    }

    #[test]
    fn torsion_orders() {
        assert_eq!(Phase::new(1, 6).order(), 6);
        assert_eq!(Phase::new(2, 6).order(), 3);
        assert_eq!(Phase::ZERO.order(), 1);
        let q = Phase::new(1, 5);
        assert_eq!(q.times(5), Phase::ZERO);
        assert_eq!(q.times(7), Phase::new(2, 5));
        assert_eq!(q.times(-1), Phase::new(4, 5));
    }

    #[test]
    fn complex_embedding_is_a_character() {
        let a = Phase::new(1, 8);
        let b = Phase::new(1, 3);
        let lhs = (a + b).as_complex();
        let rhs = a.as_complex() * b.as_complex();
        assert!((lhs - rhs).norm() < 1e-12);
        assert!((Phase::HALF.as_complex() - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }
}
