//! Exact values in `{0} ∪ μ₃` and in the Eisenstein integers `Z[ϖ]`.
//!
//! `ϖ` is the complex cube root of unity `e^{2πi/3}`, so `ϖ² = -1 - ϖ`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `ϖ = e^{2πi/3}` as a complex double.
pub fn omega_c64() -> Complex64 {
    Complex64::new(-0.5, 0.75f64.sqrt())
}

/// A character value: zero or a cube root of unity `ϖ^e`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum EisensteinValue {
    Zero,
    /// `ϖ^e` with `e ∈ {0, 1, 2}`.
    Root(u8),
}

impl EisensteinValue {
    pub const ONE: EisensteinValue = EisensteinValue::Root(0);

    pub fn root(e: u32) -> Self {
        EisensteinValue::Root((e % 3) as u8)
    }

    pub fn is_zero(self) -> bool {
        matches!(self, EisensteinValue::Zero)
    }

    /// Exponent of a nonzero value.
    pub fn exponent(self) -> Option<u8> {
        match self {
            EisensteinValue::Zero => None,
            EisensteinValue::Root(e) => Some(e),
        }
    }

    pub fn conj(self) -> Self {
        match self {
            EisensteinValue::Zero => EisensteinValue::Zero,
            EisensteinValue::Root(e) => EisensteinValue::Root((3 - e) % 3),
        }
    }

    pub fn pow(self, n: u32) -> Self {
        match self {
            EisensteinValue::Zero if n == 0 => EisensteinValue::ONE,
            EisensteinValue::Zero => EisensteinValue::Zero,
            EisensteinValue::Root(e) => EisensteinValue::root(e as u32 * (n % 3)),
        }
    }

    pub fn to_int(self) -> EisensteinInt {
        match self {
            EisensteinValue::Zero => EisensteinInt::ZERO,
            EisensteinValue::Root(0) => EisensteinInt::ONE,
            EisensteinValue::Root(1) => EisensteinInt::OMEGA,
            EisensteinValue::Root(_) => EisensteinInt::new(-1, -1),
        }
    }

    pub fn to_c64(self) -> Complex64 {
        self.to_int().to_c64()
    }
}

impl Mul for EisensteinValue {
    type Output = EisensteinValue;
    fn mul(self, rhs: EisensteinValue) -> EisensteinValue {
        match (self, rhs) {
            (EisensteinValue::Root(a), EisensteinValue::Root(b)) => EisensteinValue::Root((a + b) % 3),
            _ => EisensteinValue::Zero,
        }
    }
}

impl fmt::Display for EisensteinValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EisensteinValue::Zero => write!(f, "0"),
            EisensteinValue::Root(0) => write!(f, "1"),
            EisensteinValue::Root(1) => write!(f, "w"),
            EisensteinValue::Root(_) => write!(f, "w^2"),
        }
    }
}

/// `a + bϖ` with integer `a`, `b`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "[i128; 2]", from = "[i128; 2]")]
pub struct EisensteinInt {
    pub a: i128,
    pub b: i128,
}

impl From<EisensteinInt> for [i128; 2] {
    fn from(z: EisensteinInt) -> Self {
        [z.a, z.b]
    }
}

impl From<[i128; 2]> for EisensteinInt {
    fn from([a, b]: [i128; 2]) -> Self {
        EisensteinInt { a, b }
    }
}

impl EisensteinInt {
    pub const ZERO: EisensteinInt = EisensteinInt { a: 0, b: 0 };
    pub const ONE: EisensteinInt = EisensteinInt { a: 1, b: 0 };
    pub const OMEGA: EisensteinInt = EisensteinInt { a: 0, b: 1 };

    pub const fn new(a: i128, b: i128) -> Self {
        EisensteinInt { a, b }
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// `(a + bϖ)‾ = (a - b) - bϖ`.
    pub fn conj(self) -> Self {
        EisensteinInt::new(self.a - self.b, -self.b)
    }

    /// `a² - ab + b²`.
    pub fn norm(self) -> i128 {
        self.a * self.a - self.a * self.b + self.b * self.b
    }

    /// True when the value lies in `Z` (it is then its own conjugate).
    pub fn is_rational(self) -> bool {
        self.b == 0
    }

    /// Multiply by `ϖ^e`.
    pub fn mul_omega_pow(self, e: u8) -> Self {
        match e % 3 {
            0 => self,
            // (a + bϖ)ϖ = -b + (a - b)ϖ
            1 => EisensteinInt::new(-self.b, self.a - self.b),
            // (a + bϖ)ϖ² = (b - a) - aϖ
            _ => EisensteinInt::new(self.b - self.a, -self.a),
        }
    }

    /// Multiply by a character value.
    pub fn mul_value(self, v: EisensteinValue) -> Self {
        match v {
            EisensteinValue::Zero => EisensteinInt::ZERO,
            EisensteinValue::Root(e) => self.mul_omega_pow(e),
        }
    }

    pub fn to_c64(self) -> Complex64 {
        let w = omega_c64();
        Complex64::new(self.a as f64, 0.0) + w * self.b as f64
    }
}

impl Add for EisensteinInt {
    type Output = EisensteinInt;
    fn add(self, rhs: Self) -> Self {
        EisensteinInt::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl AddAssign for EisensteinInt {
    fn add_assign(&mut self, rhs: Self) {
        self.a += rhs.a;
        self.b += rhs.b;
    }
}

impl Sub for EisensteinInt {
    type Output = EisensteinInt;
    fn sub(self, rhs: Self) -> Self {
        EisensteinInt::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Neg for EisensteinInt {
    type Output = EisensteinInt;
    fn neg(self) -> Self {
        EisensteinInt::new(-self.a, -self.b)
    }
}

impl Mul for EisensteinInt {
    type Output = EisensteinInt;
    fn mul(self, rhs: Self) -> Self {
        // (a + bϖ)(c + dϖ) = (ac - bd) + (ad + bc - bd)ϖ
        let bd = self.b * rhs.b;
        EisensteinInt::new(self.a * rhs.a - bd, self.a * rhs.b + self.b * rhs.a - bd)
    }
}

impl Mul<i128> for EisensteinInt {
    type Output = EisensteinInt;
    fn mul(self, rhs: i128) -> Self {
        EisensteinInt::new(self.a * rhs, self.b * rhs)
    }
}

impl Sum for EisensteinInt {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(EisensteinInt::ZERO, |acc, z| acc + z)
    }
}

impl From<EisensteinValue> for EisensteinInt {
    fn from(v: EisensteinValue) -> Self {
        v.to_int()
    }
}

impl fmt::Display for EisensteinInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}
