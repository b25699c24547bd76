//! Double-double arithmetic: an unevaluated sum `hi + lo` of two `f64`
//! values with `|lo| <= ulp(hi)/2`, giving roughly 106 bits of mantissa.
//!
//! Only the operations the Hodge-theoretic algorithms need are provided.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, Sub, SubAssign};

use num_traits::{Num, One, Zero};

#[derive(Clone, Copy, Debug, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };
    pub const PI: Self = Self { hi: std::f64::consts::PI, lo: 1.224_646_799_147_353_2e-16 };
    pub const LN2: Self = Self { hi: std::f64::consts::LN_2, lo: 2.319_046_813_846_299_6e-17 };
    pub const EPSILON: f64 = 4.930_380_657_631_324e-32;

    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        Self { hi, lo }
    }

    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite()
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 { -self } else { self }
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p1, p2) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p1, p2 + self.lo * b);
        Self { hi, lo }
    }

    fn ldexp(self, k: i32) -> Self {
        let f = 2f64.powi(k);
        Self { hi: self.hi * f, lo: self.lo * f }
    }

    pub fn floor(self) -> Self {
        let hi = self.hi.floor();
        if hi == self.hi {
            Self::new(hi, self.lo.floor())
        } else {
            Self { hi, lo: 0.0 }
        }
    }

    pub fn round(self) -> Self {
        (self + Self::from_f64(0.5)).floor()
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 { Self::ZERO } else { Self::from_f64(f64::NAN) };
        }
        let x = self.hi.sqrt();
        let xx = Self::from_f64(x);
        let r = self - xx * xx;
        xx + Self::from_f64(r.hi / (2.0 * x))
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Self::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Self::ZERO;
        }
        let k = (self.hi / Self::LN2.hi).round();
        let r = (self - Self::LN2.mul_f64(k)).ldexp(-10);
        // Taylor series of exp(r) - 1 on |r| < 2^-10
        let mut term = r;
        let mut sum = r;
        let mut n = 1.0;
        loop {
            n += 1.0;
            term = term * r / Self::from_f64(n);
            sum += term;
            if term.hi.abs() < 1e-34 || n > 40.0 {
                break;
            }
        }
        // (1 + s)^2 - 1 = s(2 + s), repeated for the 2^10 scaling
        for _ in 0..10 {
            sum = sum * (sum + Self::from_f64(2.0));
        }
        (sum + Self::ONE).ldexp(k as i32)
    }

    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Self::from_f64(if self.hi == 0.0 { f64::NEG_INFINITY } else { f64::NAN });
        }
        let mut x = Self::from_f64(self.hi.ln());
        for _ in 0..2 {
            x = x + self * (-x).exp() - Self::ONE;
        }
        x
    }

    /// sin and cos of an argument already reduced to |x| <= pi/4.
    fn sin_cos_reduced(x: Self) -> (Self, Self) {
        let x2 = x * x;
        let mut s = x;
        let mut term = x;
        let mut k = 1.0;
        loop {
            term = -term * x2 / Self::from_f64((k + 1.0) * (k + 2.0));
            s += term;
            k += 2.0;
            if term.hi.abs() < 1e-34 || k > 60.0 {
                break;
            }
        }
        let mut c = Self::ONE;
        let mut term = Self::ONE;
        let mut k = 0.0;
        loop {
            term = -term * x2 / Self::from_f64((k + 1.0) * (k + 2.0));
            c += term;
            k += 2.0;
            if term.hi.abs() < 1e-34 || k > 60.0 {
                break;
            }
        }
        (s, c)
    }

    pub fn sin_cos(self) -> (Self, Self) {
        let half_pi = Self::PI.ldexp(-1);
        let q = (self / half_pi).round();
        let r = self - half_pi * q;
        let (s, c) = Self::sin_cos_reduced(r);
        match (q.hi.rem_euclid(4.0)) as i64 {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub fn sin(self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(self) -> Self {
        self.sin_cos().1
    }

    pub fn atan2(self, x: Self) -> Self {
        let y = self;
        if x.hi == 0.0 && y.hi == 0.0 {
            return Self::ZERO;
        }
        let r = (x * x + y * y).sqrt();
        let (xn, yn) = (x / r, y / r);
        let mut t = Self::from_f64(y.hi.atan2(x.hi));
        for _ in 0..2 {
            let (s, c) = t.sin_cos();
            // sin(t - t*) = s*xn - c*yn
            t -= s * xn - c * yn;
        }
        t
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl PartialEq for DoubleDouble {
    fn eq(&self, other: &Self) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

/// Scientific notation with 32 significant digits.
impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.hi.is_finite() || self.hi == 0.0 {
            return write!(f, "{}", self.hi);
        }
        let ten = Self::from_f64(10.0);
        let mut y = self.abs();
        let mut e = y.hi.log10().floor() as i32;
        for _ in 0..e.unsigned_abs() {
            y = if e > 0 { y / ten } else { y * ten };
        }
        if y.hi >= 10.0 {
            y /= ten;
            e += 1;
        } else if y.hi < 1.0 {
            y *= ten;
            e -= 1;
        }
        let mut digits = Vec::with_capacity(33);
        for _ in 0..33 {
            let d = y.floor().hi.clamp(0.0, 9.0);
            digits.push(d as u8);
            y = (y - Self::from_f64(d)) * ten;
        }
        // round on the 33rd digit
        if digits.pop().is_some_and(|d| d >= 5) {
            let mut i = digits.len();
            loop {
                if i == 0 {
                    digits.insert(0, 1);
                    digits.pop();
                    e += 1;
                    break;
                }
                i -= 1;
                if digits[i] == 9 {
                    digits[i] = 0;
                } else {
                    digits[i] += 1;
                    break;
                }
            }
        }
        let sign = if self.hi < 0.0 { "-" } else { "" };
        let tail: String = digits[1..].iter().map(|d| char::from(b'0' + d)).collect();
        write!(f, "{sign}{}.{tail}e{e}", digits[0])
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Self { hi: q1, lo: q2 } + Self::from_f64(q3)
    }
}

impl Rem for DoubleDouble {
    type Output = Self;
    fn rem(self, b: Self) -> Self {
        let q = self / b;
        let t = if q.hi < 0.0 { -((-q).floor()) } else { q.floor() };
        self - b * t
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt),*) => {$(
        impl $tr for DoubleDouble {
            fn $m(&mut self, b: Self) {
                *self = *self $op b;
            }
        }
    )*};
}
assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /);

impl Sum for DoubleDouble {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        Self::ZERO
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        Self::ONE
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = num_traits::ParseFloatError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        f64::from_str_radix(s, radix).map(Self::from_f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_has_full_precision() {
        assert_eq!(DoubleDouble::PI.to_string(), "3.1415926535897932384626433832795e0");
        assert_eq!((-DoubleDouble::from_f64(0.125)).to_string(), "-1.2500000000000000000000000000000e-1");
        assert_eq!(DoubleDouble::from_f64(1000.0).to_string(), "1.0000000000000000000000000000000e3");
    }

    fn dd(x: f64) -> DoubleDouble {
        DoubleDouble::from_f64(x)
    }

    #[test]
    fn third_times_three_is_one_to_double_double_precision() {
        let t = dd(1.0) / dd(3.0);
        let e = (t * dd(3.0) - dd(1.0)).abs();
        assert!(e.to_f64() < 1e-31);
        // the low word carries information beyond f64
        assert!(t.lo() != 0.0);
    }

    #[test]
    fn sqrt_two_squares_back() {
        let s = dd(2.0).sqrt();
        assert!((s * s - dd(2.0)).abs().to_f64() < 1e-31);
    }

    #[test]
    fn exp_ln_round_trip() {
        for x in [-20.0, -1.5, -1e-3, 0.0, 0.3, 1.0, 7.25, 50.0] {
            let y = dd(x).exp().ln();
            assert!((y - dd(x)).abs().to_f64() < 1e-30 * (1.0 + x.abs()), "x={x}");
        }
    }

    #[test]
    fn e_matches_known_digits() {
        // e = 2.718281828459045 + 1.4456468917292502e-16
        let e = dd(1.0).exp();
        assert_eq!(e.hi(), std::f64::consts::E);
        assert!((e.lo() - 1.445_646_891_729_250_2e-16).abs() < 1e-31);
    }

    #[test]
    fn trig_identities() {
        for x in [-7.0, -1.0, 0.1, 0.785, 2.0, 3.0, 10.0] {
            let (s, c) = dd(x).sin_cos();
            assert!((s * s + c * c - dd(1.0)).abs().to_f64() < 1e-30);
            assert!((s.to_f64() - x.sin()).abs() < 1e-15);
            let back = s.atan2(c);
            let mut diff = (back - dd(x)).to_f64();
            diff = diff.rem_euclid(2.0 * std::f64::consts::PI);
            let diff = diff.min(2.0 * std::f64::consts::PI - diff);
            assert!(diff < 1e-29, "x={x} diff={diff}");
        }
    }

    #[test]
    fn pi_via_atan2() {
        let p = dd(0.0).atan2(dd(-1.0));
        assert!((p - DoubleDouble::PI).abs().to_f64() < 1e-31);
    }
}
