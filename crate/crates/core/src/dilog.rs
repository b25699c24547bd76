//! Dilogarithm `Li2` (principal branch) and the Bloch–Wigner function `D2`.
//!
//! Arguments are mapped into `|z| <= 1, Re z <= 1/2` with the inversion and
//! reflection formulas, where the Bernoulli series in `u = -log(1 - z)`
//! converges geometrically with ratio at most `(|u| / 2pi)^2 < 0.05`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::real::{cabs, carg, cln, creal, cx, Cx, DoubleDouble, Real};

/// Value of `Li2` together with a flag telling whether `z` lies on the
/// branch cut `(1, inf)`. On the cut the value is the limit from above,
/// matching logarithms with argument in `[-pi, pi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchedValue<R: Real> {
    pub value: Cx<R>,
    pub on_cut: bool,
}

/// A point of the Riemann sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum P1<R: Real> {
    Finite(Cx<R>),
    Infinity,
}

const SERIES_TERMS: usize = 40;

/// `B_{2k} / (2k+1)!` for `k = 1..SERIES_TERMS`, as double-double pairs.
fn series_coefficients() -> &'static [(f64, f64)] {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let m = 2 * SERIES_TERMS;
        let mut b: Vec<BigRational> = vec![BigRational::one()];
        for n in 1..=m {
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one();
            for (k, bk) in b.iter().enumerate() {
                acc += BigRational::from_integer(binom.clone()) * bk;
                binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
            }
            b.push(-acc / BigRational::from_integer(BigInt::from(n + 1)));
        }
        let mut fact = BigInt::one();
        let mut out = Vec::with_capacity(SERIES_TERMS);
        for n in 1..=m + 1 {
            fact *= BigInt::from(n);
            if n % 2 == 1 && n >= 3 {
                let c = &b[n - 1] / BigRational::from_integer(fact.clone());
                let hi = c.to_f64().unwrap_or(0.0);
                let lo = (c - BigRational::from_float(hi).unwrap_or_default()).to_f64().unwrap_or(0.0);
                out.push((hi, lo));
            }
        }
        out
    })
}

fn coefficient<R: Real>(k: usize) -> R {
    let (hi, lo) = series_coefficients()[k];
    R::from_f64(hi) + R::from_f64(lo)
}

pub fn zeta2<R: Real>() -> R {
    let p = R::pi();
    p * p / R::from_f64(6.0)
}

/// Catalan's constant, `D2(i)`.
pub fn catalan<R: Real>() -> R {
    R::from_f64(0.915_965_594_177_219) + R::from_f64(3.747_558_421_514_984e-18)
}

/// Bernoulli series, valid for `|z| <= 1` and `Re z <= 1/2`.
fn li2_core<R: Real>(z: Cx<R>) -> Cx<R> {
    let u = -cln(creal(R::one()) - z);
    let u2 = u * u;
    let quarter = R::from_f64(0.25);
    let mut sum = u - u2 * quarter;
    let mut power = u;
    let tiny = R::epsilon() * R::from_f64(1e-2);
    for k in 0..SERIES_TERMS {
        power = power * u2;
        let term = power * coefficient::<R>(k);
        sum = sum + term;
        if cabs(term) <= tiny * cabs(sum) {
            break;
        }
    }
    sum
}

/// Principal-branch dilogarithm.
pub fn li2<R: Real>(z: Cx<R>) -> BranchedValue<R> {
    let one = R::one();
    let on_cut = z.im == R::zero() && z.re > one;
    let value = if z == Cx::new(R::zero(), R::zero()) {
        z
    } else if z == creal(one) {
        creal(zeta2())
    } else if cabs(z) > one {
        let l = cln(-z);
        let half = R::from_f64(0.5);
        -li2_unit_disk(one_over(z)) - creal(zeta2::<R>()) - l * l * half
    } else {
        li2_unit_disk(z)
    };
    BranchedValue { value, on_cut }
}

fn one_over<R: Real>(z: Cx<R>) -> Cx<R> {
    creal(R::one()) / z
}

fn li2_unit_disk<R: Real>(z: Cx<R>) -> Cx<R> {
    let one = creal(R::one());
    if z.re > R::from_f64(0.5) {
        if z == one {
            return creal(zeta2());
        }
        creal(zeta2::<R>()) - cln(z) * cln(one - z) - li2_core(one - z)
    } else {
        li2_core(z)
    }
}

/// Bloch–Wigner dilogarithm `D2(z) = Im Li2(z) + arg(1 - z) log|z|`.
/// Non-finite input is treated as the point at infinity.
pub fn bloch_wigner<R: Real>(z: Cx<R>) -> R {
    let zero = R::zero();
    let one = R::one();
    if !z.re.to_f64().is_finite() || !z.im.to_f64().is_finite() {
        return zero;
    }
    if z == Cx::new(zero, zero) || z == creal(one) {
        return zero;
    }
    if cabs(z) > one {
        return -bloch_wigner(one_over(z));
    }
    if z.re > R::from_f64(0.5) {
        return -bloch_wigner(creal(one) - z);
    }
    li2_core(z).im + carg(creal(one) - z) * cabs(z).ln()
}

pub fn bloch_wigner_p1<R: Real>(p: P1<R>) -> R {
    match p {
        P1::Finite(z) => bloch_wigner(z),
        P1::Infinity => R::zero(),
    }
}

/// `D2` at `f64`, the common case.
pub fn d2(z: num_complex::Complex64) -> f64 {
    bloch_wigner(z)
}

/// `D2` evaluated in double-double and rounded.
pub fn d2_precise(z: num_complex::Complex64) -> f64 {
    bloch_wigner(cx(DoubleDouble::from_f64(z.re), DoubleDouble::from_f64(z.im))).to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Direct power series, only for |z| small enough to converge quickly.
    fn li2_power_series(z: Complex64) -> Complex64 {
        let mut sum = c(0.0, 0.0);
        let mut p = z;
        for n in 1..2000 {
            sum += p / (n as f64 * n as f64);
            p *= z;
        }
        sum
    }

    #[test]
    fn li2_special_values() {
        assert_eq!(li2(c(0.0, 0.0)).value, c(0.0, 0.0));
        assert!((li2(c(1.0, 0.0)).value.re - PI * PI / 6.0).abs() < 1e-15);
        // alternating series summed with averaging of consecutive partial sums
        let (mut s, mut prev) = (0.0, 0.0);
        for n in 1..=200_000u64 {
            prev = s;
            let t = 1.0 / (n as f64 * n as f64);
            s += if n % 2 == 1 { -t } else { t };
        }
        let brute = 0.5 * (s + prev);
        assert!((li2(c(-1.0, 0.0)).value.re - brute).abs() < 1e-12);
        assert!((li2(c(-1.0, 0.0)).value.re + PI * PI / 12.0).abs() < 1e-15);
    }

    #[test]
    fn li2_matches_power_series_inside_disk() {
        for &(re, im) in &[(0.3, 0.2), (-0.5, 0.4), (0.1, -0.7), (0.6, 0.3), (-0.2, -0.2)] {
            let z = c(re, im);
            let e = li2(z).value - li2_power_series(z);
            assert!(e.norm() < 1e-13 * li2_power_series(z).norm(), "z={z}");
        }
    }

    #[test]
    fn li2_cut_flag_and_side() {
        let v = li2(c(2.0, 0.0));
        assert!(v.on_cut);
        // Im Li2(x + i0) = pi log x
        assert!((v.value.im - PI * 2f64.ln()).abs() < 1e-14);
        assert!((v.value.re - PI * PI / 4.0).abs() < 1e-14);
        let above = li2(c(2.0, 1e-12)).value;
        assert!((above - v.value).norm() < 1e-10);
        assert!(!li2(c(0.5, 0.0)).on_cut);
    }

    #[test]
    fn catalan_constant() {
        assert!((d2(c(0.0, 1.0)) - 0.915_965_594_177_219).abs() < 1e-15);
        let dd = bloch_wigner(cx(DoubleDouble::ZERO, DoubleDouble::ONE));
        assert!((dd - catalan::<DoubleDouble>()).abs().to_f64() < 1e-30);
    }

    #[test]
    fn vanishes_on_real_line_and_at_special_points() {
        for x in [-5.0, -1.0, -0.3, 0.0, 0.2, 0.5, 1.0, 1.5, 3.0, 1e6] {
            assert_eq!(d2(c(x, 0.0)), 0.0, "x={x}");
        }
        assert_eq!(d2(c(f64::INFINITY, 0.0)), 0.0);
        assert_eq!(bloch_wigner_p1::<f64>(P1::Infinity), 0.0);
    }

    #[test]
    fn unit_circle_fourier_series() {
        let th = PI / 3.0;
        let mut s = 0.0;
        for n in 1..2_000_000u64 {
            s += (n as f64 * th).sin() / (n as f64 * n as f64);
        }
        assert!((d2(c(th.cos(), th.sin())) - s).abs() < 1e-11);
    }

    #[test]
    fn double_double_agrees_with_f64() {
        for &(re, im) in &[(0.3, 0.2), (2.0, 3.0), (-4.0, 0.1), (0.9, -0.05)] {
            let a = d2(c(re, im));
            let b = d2_precise(c(re, im));
            assert!((a - b).abs() < 1e-14, "z={re}+{im}i");
        }
    }
}
