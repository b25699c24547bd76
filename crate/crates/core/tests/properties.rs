use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hodge_core::biextension::{build_biextension, extract_invariants, random_spec};
use hodge_core::dilog::{bloch_wigner, li2};
use hodge_core::height::{dual_oriented, height, height_biextension};
use hodge_core::linalg::CMat;
use hodge_core::mhs::deligne_bigrading;
use hodge_core::real::{cx, DoubleDouble};
use hodge_core::schema::Scalar;
use hodge_core::splitting::{delta_via_log, deligne_delta, splitting_from_bigrading};

const TOL: f64 = 1e-9;

fn d(z: Complex64) -> f64 {
    bloch_wigner::<f64>(z)
}

/// Points off the real axis and away from 0 and 1, where `D2` is smooth.
fn generic_point() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, 0.05..3.0f64, any::<bool>())
        .prop_map(|(re, im, up)| Complex64::new(re, if up { im } else { -im }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn d2_symmetries(z in generic_point()) {
        let v = d(z);
        prop_assert!((d(z.conj()) + v).abs() < 1e-12);
        prop_assert!((d(1.0 / z) + v).abs() < 1e-12);
        prop_assert!((d(1.0 - z) + v).abs() < 1e-12);
        // the six-fold orbit z, 1/(1-z), 1-1/z carries the same value
        prop_assert!((d(1.0 / (1.0 - z)) - v).abs() < 1e-12);
        prop_assert!((d(1.0 - 1.0 / z) - v).abs() < 1e-12);
    }

    #[test]
    fn d2_five_term(x in generic_point(), y in generic_point()) {
        let den = 1.0 - x * y;
        prop_assume!(den.norm() > 1e-2);
        let r = d(x) + d(y) + d((1.0 - x) / den) + d(den) + d((1.0 - y) / den);
        prop_assert!(r.abs() < 1e-10, "residual {r:e}");
    }

    #[test]
    fn d2_distribution(z in generic_point()) {
        // D(z^2) = 2 (D(z) + D(-z))
        prop_assert!((d(z * z) - 2.0 * (d(z) + d(-z))).abs() < 1e-11);
    }

    #[test]
    fn li2_reflection(z in generic_point()) {
        // Li2(z) + Li2(1-z) = ζ(2) - log z log(1-z) off the real axis
        let lhs = li2::<f64>(z).value + li2::<f64>(1.0 - z).value;
        let rhs = std::f64::consts::PI.powi(2) / 6.0 - z.ln() * (1.0 - z).ln();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn d2_double_double_agrees(z in generic_point()) {
        let hi = bloch_wigner::<DoubleDouble>(cx(DoubleDouble::from_f64(z.re), DoubleDouble::from_f64(z.im)));
        prop_assert!((hi.to_f64() - d(z)).abs() < 1e-13);
    }

    #[test]
    fn double_double_arithmetic(a in -1e6..1e6f64, b in 1e-3..1e3f64) {
        let (x, y) = (DoubleDouble::from_f64(a), DoubleDouble::from_f64(b));
        let back = (x / y) * y - x;
        prop_assert!(back.abs().to_f64() <= 1e-28 * a.abs().max(1.0));
        let r = (x * x + y * y).sqrt();
        prop_assert!((r * r - x * x - y * y).abs().to_f64() <= 1e-27 * (a * a + b * b));
    }

    #[test]
    fn decimal_text_is_read_exactly(n in -10_000_000i64..10_000_000, shift in 0u32..12) {
        let text = format!("{}e-{shift}", n);
        let q = Scalar::Text(text).to_rational().unwrap();
        let expected = BigRational::new(BigInt::from(n), BigInt::from(10u64.pow(shift)));
        prop_assert_eq!(q, expected);
        let frac = Scalar::Text(format!("{n}/7")).to_rational().unwrap();
        prop_assert_eq!(frac, BigRational::new(BigInt::from(n), BigInt::from(7)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn splitting_invariants(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_spec::<f64>(&mut rng, 6);
        let h = build_biextension(&spec, TOL).unwrap();
        let b = deligne_bigrading(&h.mhs).unwrap();
        let s = splitting_from_bigrading(&b, TOL).unwrap();
        let alt = delta_via_log(&b, TOL).unwrap();
        prop_assert!(s.delta.max_abs_diff(&alt.delta) < 1e-10);
        prop_assert!(s.hodge_components.keys().all(|&(p, q)| p < 0 && q < 0));
        // Y is pure of bidegree (0,0), so its components sum back to it
        let y_parts = b.hodge_components(b.y(), 0.0);
        let total = y_parts.values().fold(CMat::zeros(h.mhs.dim(), h.mhs.dim()), |acc, m| &acc + m);
        prop_assert!(total.max_abs_diff(b.y()) < 1e-10);
        let dual = deligne_delta(&h.mhs.dual()).unwrap();
        prop_assert!(dual.delta.max_abs_diff(&(-&s.delta.transpose())) < 1e-10);
    }

    #[test]
    fn biextension_heights(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_spec::<f64>(&mut rng, 8);
        let h = build_biextension(&spec, TOL).unwrap();
        let ht = height(&h).unwrap();
        prop_assert!((ht - spec.ht).abs() < 1e-10);
        prop_assert!((height_biextension(&h).unwrap() - ht).abs() < 1e-10);
        prop_assert!((height(&dual_oriented(&h).unwrap()).unwrap() + ht).abs() < 1e-10);
        prop_assert!(extract_invariants(&h).unwrap().max_difference(&spec) < 1e-10);
    }

    #[test]
    fn tate_twist_shifts_types(seed in any::<u64>(), a in -3i32..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_spec::<f64>(&mut rng, 6);
        let h = build_biextension(&spec, TOL).unwrap();
        let b = deligne_bigrading(&h.mhs).unwrap();
        let t = deligne_bigrading(&h.mhs.tate_twist(a)).unwrap();
        let shifted: Vec<(i32, i32, usize)> =
            b.components().iter().map(|(&(p, q), s)| (p - a, q - a, s.dim())).collect();
        let got: Vec<(i32, i32, usize)> = t.components().iter().map(|(&(p, q), s)| (p, q, s.dim())).collect();
        prop_assert_eq!(shifted, got);
        let delta = deligne_delta(&h.mhs).unwrap().delta;
        prop_assert!(deligne_delta(&h.mhs.tate_twist(a)).unwrap().delta.max_abs_diff(&delta) < 1e-12);
    }
}
