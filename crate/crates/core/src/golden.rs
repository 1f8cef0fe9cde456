//! Exact arithmetic in the quadratic field ℚ\[√5\].
//!
//! Every coordinate of the icosahedron, dodecahedron, 600-cell and 120-cell
//! is of the form `a + b√5` with rational `a`, `b`, so identities over those
//! vertex sets can be checked without floating point.

use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `a + b√5` with rational `a` and `b`.
///
/// The representation is unique because √5 is irrational, so `PartialEq` is
/// exact equality of real numbers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QSqrt5 {
    pub a: BigRational,
    pub b: BigRational,
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl QSqrt5 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Self { a, b }
    }

    /// `(a_num/a_den) + (b_num/b_den)·√5`.
    pub fn from_ratios(a_num: i64, a_den: i64, b_num: i64, b_den: i64) -> Self {
        Self {
            a: ratio(a_num, a_den),
            b: ratio(b_num, b_den),
        }
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Self {
            a: ratio(num, den),
            b: BigRational::zero(),
        }
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(n, 1)
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn sqrt5() -> Self {
        Self::from_ratios(0, 1, 1, 1)
    }

    /// The golden ratio φ = (1 + √5)/2.
    pub fn phi() -> Self {
        Self::from_ratios(1, 2, 1, 2)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a − b√5`.
    pub fn conjugate(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Field norm `a² − 5b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(BigInt::from(5)) * &self.b * &self.b
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conjugate();
        Some(Self {
            a: c.a / &n,
            b: c.b / n,
        })
    }

    /// Sign of the real number `a + b√5`, decided exactly.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sa == sb || sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        // opposite signs: compare a² with 5b²
        let a2 = &self.a * &self.a;
        let b2 = BigRational::from_integer(BigInt::from(5)) * &self.b * &self.b;
        if a2 > b2 {
            sa
        } else {
            sb
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * libm::sqrt(5.0)
    }
}

fn sign_of(x: &BigRational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

impl fmt::Display for QSqrt5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}·√5", self.b)
        } else {
            write!(f, "{} + {}·√5", self.a, self.b)
        }
    }
}

impl<'a> Add<&'a QSqrt5> for &'a QSqrt5 {
    type Output = QSqrt5;
    fn add(self, rhs: &QSqrt5) -> QSqrt5 {
        QSqrt5 {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl<'a> Sub<&'a QSqrt5> for &'a QSqrt5 {
    type Output = QSqrt5;
    fn sub(self, rhs: &QSqrt5) -> QSqrt5 {
        QSqrt5 {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl<'a> Mul<&'a QSqrt5> for &'a QSqrt5 {
    type Output = QSqrt5;
    fn mul(self, rhs: &QSqrt5) -> QSqrt5 {
        let five = BigRational::from_integer(BigInt::from(5));
        QSqrt5 {
            a: &self.a * &rhs.a + five * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl<'a> Div<&'a QSqrt5> for &'a QSqrt5 {
    type Output = QSqrt5;
    /// Panics on division by zero, like the rational types it wraps.
    fn div(self, rhs: &QSqrt5) -> QSqrt5 {
        self * &rhs.inverse().expect("division by zero in Q[sqrt5]")
    }
}

impl Neg for QSqrt5 {
    type Output = QSqrt5;
    fn neg(self) -> QSqrt5 {
        QSqrt5 {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl Neg for &QSqrt5 {
    type Output = QSqrt5;
    fn neg(self) -> QSqrt5 {
        -(self.clone())
    }
}

impl Add for QSqrt5 {
    type Output = QSqrt5;
    fn add(self, rhs: QSqrt5) -> QSqrt5 {
        &self + &rhs
    }
}

impl Sub for QSqrt5 {
    type Output = QSqrt5;
    fn sub(self, rhs: QSqrt5) -> QSqrt5 {
        &self - &rhs
    }
}

impl Mul for QSqrt5 {
    type Output = QSqrt5;
    fn mul(self, rhs: QSqrt5) -> QSqrt5 {
        &self * &rhs
    }
}

impl Div for QSqrt5 {
    type Output = QSqrt5;
    fn div(self, rhs: QSqrt5) -> QSqrt5 {
        &self / &rhs
    }
}

impl From<i64> for QSqrt5 {
    fn from(n: i64) -> Self {
        Self::integer(n)
    }
}

impl From<BigRational> for QSqrt5 {
    fn from(a: BigRational) -> Self {
        Self {
            a,
            b: BigRational::zero(),
        }
    }
}

impl One for QSqrt5 {
    fn one() -> Self {
        QSqrt5::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_ratio_satisfies_its_quadratic() {
        let phi = QSqrt5::phi();
        assert_eq!(&phi * &phi, &phi + &QSqrt5::one());
        let inv = phi.inverse().unwrap();
        assert_eq!(inv, &phi - &QSqrt5::one());
    }

    #[test]
    fn exact_sign() {
        // 2 - √5 < 0, 3 - √5 > 0, -9/4 + √5 < 0
        assert_eq!(QSqrt5::from_ratios(2, 1, -1, 1).signum(), -1);
        assert_eq!(QSqrt5::from_ratios(3, 1, -1, 1).signum(), 1);
        assert_eq!(QSqrt5::from_ratios(-9, 4, 1, 1).signum(), -1);
        assert_eq!(QSqrt5::zero().signum(), 0);
    }

    #[test]
    fn float_mirror() {
        let phi = QSqrt5::phi();
        assert!((phi.to_f64() - 1.618_033_988_749_895).abs() < 1e-15);
        assert_eq!(format!("{}", QSqrt5::from_ratios(2, 1, 2, 5)), "2 + 2/5·√5");
    }
}
