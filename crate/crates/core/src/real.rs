//! Scalar field abstraction. Every algorithm is generic over a real type
//! `R`; complex scalars are `Complex<R>`. Two precisions are provided:
//! `f64` (53 bits) and [`DoubleDouble`] (106 bits).

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, Neg, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};

pub use crate::dd::DoubleDouble;

pub trait Real:
    Copy
    + Send
    + Sync
    + 'static
    + Debug
    + Display
    + PartialOrd
    + Num
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
{
    /// Mantissa bits.
    const BITS: u32;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn from_bigint(n: &BigInt) -> Self;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn atan2(self, x: Self) -> Self;
    fn pi() -> Self;
    fn epsilon() -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    fn from_rational(q: &BigRational) -> Self {
        Self::from_bigint(q.numer()) / Self::from_bigint(q.denom())
    }

    fn hypot(self, y: Self) -> Self {
        let (a, b) = (self.abs(), y.abs());
        let m = if a > b { a } else { b };
        if m == Self::zero() {
            return m;
        }
        let (a, b) = (a / m, b / m);
        m * (a * a + b * b).sqrt()
    }

    fn max(self, o: Self) -> Self {
        if o > self { o } else { self }
    }
}

impl Real for f64 {
    const BITS: u32 = 53;

    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn from_bigint(n: &BigInt) -> Self {
        n.to_f64().unwrap_or(f64::NAN)
    }
    fn from_rational(q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn atan2(self, x: Self) -> Self {
        f64::atan2(self, x)
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn epsilon() -> Self {
        f64::EPSILON
    }
    fn hypot(self, y: Self) -> Self {
        f64::hypot(self, y)
    }
}

impl Real for DoubleDouble {
    const BITS: u32 = 106;

    fn from_f64(x: f64) -> Self {
        DoubleDouble::from_f64(x)
    }
    fn to_f64(self) -> f64 {
        DoubleDouble::to_f64(self)
    }
    fn from_bigint(n: &BigInt) -> Self {
        let hi = n.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() {
            return DoubleDouble::from_f64(hi);
        }
        let rest = n - BigInt::from_f64_exact(hi);
        DoubleDouble::new(hi, rest.to_f64().unwrap_or(0.0))
    }
    fn abs(self) -> Self {
        DoubleDouble::abs(self)
    }
    fn sqrt(self) -> Self {
        DoubleDouble::sqrt(self)
    }
    fn exp(self) -> Self {
        DoubleDouble::exp(self)
    }
    fn ln(self) -> Self {
        DoubleDouble::ln(self)
    }
    fn sin(self) -> Self {
        DoubleDouble::sin(self)
    }
    fn cos(self) -> Self {
        DoubleDouble::cos(self)
    }
    fn atan2(self, x: Self) -> Self {
        DoubleDouble::atan2(self, x)
    }
    fn pi() -> Self {
        DoubleDouble::PI
    }
    fn epsilon() -> Self {
        DoubleDouble::from_f64(DoubleDouble::EPSILON)
    }
}

trait FromF64Exact {
    fn from_f64_exact(x: f64) -> BigInt;
}

impl FromF64Exact for BigInt {
    fn from_f64_exact(x: f64) -> BigInt {
        num_traits::FromPrimitive::from_f64(x.trunc()).unwrap_or_default()
    }
}

/// Complex scalar over `R`.
pub type Cx<R> = Complex<R>;

pub fn cx<R: Real>(re: R, im: R) -> Cx<R> {
    Complex::new(re, im)
}

pub fn cxf<R: Real>(re: f64, im: f64) -> Cx<R> {
    Complex::new(R::from_f64(re), R::from_f64(im))
}

pub fn creal<R: Real>(re: R) -> Cx<R> {
    Complex::new(re, R::zero())
}

pub fn ci<R: Real>() -> Cx<R> {
    Complex::new(R::zero(), R::one())
}

pub fn cabs<R: Real>(z: Cx<R>) -> R {
    z.re.hypot(z.im)
}

/// Argument in `[-pi, pi)`: the negative real axis maps to `-pi`.
pub fn carg<R: Real>(z: Cx<R>) -> R {
    if z.im == R::zero() && z.re < R::zero() {
        -R::pi()
    } else {
        z.im.atan2(z.re)
    }
}

/// Logarithm with argument in `[-pi, pi)`.
pub fn cln<R: Real>(z: Cx<R>) -> Cx<R> {
    cx(cabs(z).ln(), carg(z))
}

pub fn cexp<R: Real>(z: Cx<R>) -> Cx<R> {
    let m = z.re.exp();
    cx(m * z.im.cos(), m * z.im.sin())
}

pub fn to_c64<R: Real>(z: Cx<R>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

pub fn from_c64<R: Real>(z: Complex<f64>) -> Cx<R> {
    cxf(z.re, z.im)
}

pub fn two_pi_i<R: Real>() -> Cx<R> {
    cx(R::zero(), R::pi() + R::pi())
}
