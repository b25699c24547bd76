//! Signed heights of oriented mixed Hodge structures.
//!
//! An orientation fixes a generator of the rank-one top graded piece and a
//! generator of the rank-one bottom piece. With `e` the lift of the top
//! generator to `I^{a,a}` and `e^∨` the bottom generator, the height is the
//! coefficient `δ^{r,r}(e) = Ht · e^∨`, `r = -ℓ/2`.

use crate::error::{HodgeError, Result};
use crate::linalg::{CMat, CSubspace};
use crate::mhs::{deligne_bigrading, DeligneBigrading, MixedHodgeStructure};
use crate::real::{cabs, creal, Cx, Real};
use crate::splitting::splitting_from_bigrading;

/// Generators of the top and bottom graded pieces, as real vectors in the
/// rational coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Orientation<R: Real> {
    pub top: Vec<R>,
    pub bottom: Vec<R>,
}

impl<R: Real> Orientation<R> {
    pub fn new(top: Vec<R>, bottom: Vec<R>) -> Self {
        Self { top, bottom }
    }

    /// Standard basis vectors `top` and `bottom`.
    pub fn coordinate(dim: usize, top: usize, bottom: usize) -> Self {
        let unit = |i: usize| (0..dim).map(|j| if i == j { R::one() } else { R::zero() }).collect();
        Self { top: unit(top), bottom: unit(bottom) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrientedMhs<R: Real> {
    pub mhs: MixedHodgeStructure<R>,
    pub orientation: Orientation<R>,
    max: i32,
    min: i32,
}

fn complexify<R: Real>(v: &[R]) -> Vec<Cx<R>> {
    v.iter().map(|&x| creal(x)).collect()
}

impl<R: Real> OrientedMhs<R> {
    /// Checks that the extreme graded pieces have rank one and even weight
    /// and that the generators live there.
    pub fn new(mhs: MixedHodgeStructure<R>, orientation: Orientation<R>) -> Result<Self> {
        let n = mhs.dim();
        for v in [&orientation.top, &orientation.bottom] {
            if v.len() != n {
                return Err(HodgeError::DimensionMismatch { expected: n, found: v.len() });
            }
        }
        let w = mhs.weight();
        let (Some(min), Some(max)) = (w.min_weight(), w.max_weight()) else {
            return Err(HodgeError::NotOriented("empty weight filtration".into()));
        };
        if max == min {
            return Err(HodgeError::NotOriented("pure structure has no distinct top and bottom".into()));
        }
        if max % 2 != 0 || min % 2 != 0 {
            return Err(HodgeError::NotOriented(format!("extreme weights {max}, {min} must be even")));
        }
        if w.graded_dim(max) != 1 || w.graded_dim(min) != 1 {
            return Err(HodgeError::NotOriented("extreme graded pieces must have rank 1".into()));
        }
        let tol = mhs.tol();
        let top = complexify(&orientation.top);
        let bottom = complexify(&orientation.bottom);
        if w.to_complex::<R>(max - 1).contains_vector(&top, tol) {
            return Err(HodgeError::NotOriented("top generator lies in W_{max-1}".into()));
        }
        let bottom_space: CSubspace<R> = w.to_complex(min);
        if orientation.bottom.iter().all(|x| *x == R::zero()) || !bottom_space.contains_vector(&bottom, tol) {
            return Err(HodgeError::NotOriented("bottom generator must span W_min".into()));
        }
        Ok(Self { mhs, orientation, max, min })
    }

    pub fn max_weight(&self) -> i32 {
        self.max
    }

    pub fn min_weight(&self) -> i32 {
        self.min
    }

    /// `ℓ(H) = max - min`.
    pub fn length(&self) -> i32 {
        self.max - self.min
    }

    pub fn top_c(&self) -> Vec<Cx<R>> {
        complexify(&self.orientation.top)
    }

    pub fn bottom_c(&self) -> Vec<Cx<R>> {
        complexify(&self.orientation.bottom)
    }
}

/// Coefficient `c` with `v = c · bottom`.
fn bottom_coefficient<R: Real>(v: &[Cx<R>], bottom: &[Cx<R>], tol: f64) -> Result<Cx<R>> {
    let norm2: R = bottom.iter().map(|b| b.norm_sqr()).sum();
    if norm2 == R::zero() {
        return Err(HodgeError::ZeroBottomPairing(0.0));
    }
    let c = v.iter().zip(bottom).map(|(x, b)| *x * b.conj()).sum::<Cx<R>>() / creal(norm2);
    let scale = v.iter().map(|x| cabs(*x).to_f64()).fold(1.0, f64::max);
    let off = v.iter().zip(bottom).map(|(x, b)| cabs(*x - c * *b).to_f64()).fold(0.0, f64::max);
    if off > tol.sqrt() * scale {
        return Err(HodgeError::ZeroBottomPairing(off));
    }
    Ok(c)
}

/// Height from the Deligne splitting.
pub fn height<R: Real>(h: &OrientedMhs<R>) -> Result<R> {
    let b = deligne_bigrading(&h.mhs)?;
    height_with(h, &b)
}

/// Height given an already computed bigrading.
pub fn height_with<R: Real>(h: &OrientedMhs<R>, b: &DeligneBigrading<R>) -> Result<R> {
    let tol = h.mhs.tol();
    let s = splitting_from_bigrading(b, tol)?;
    let e = b.weight_projector(h.max).mul_vec(&h.top_c());
    let image = b.weight_projector(h.min).mul_vec(&s.delta.mul_vec(&e));
    Ok(bottom_coefficient(&image, &h.bottom_c(), tol)?.re)
}

/// Height through `Ht · e^∨ = ½ Im(Π_{2c}(e - ē))`, valid when at most three
/// weights occur.
pub fn height_biextension<R: Real>(h: &OrientedMhs<R>) -> Result<R> {
    let b = deligne_bigrading(&h.mhs)?;
    if b.weights().len() > 3 {
        return Err(HodgeError::NotGeneralizedBiextension(format!("{} nonzero weights", b.weights().len())));
    }
    let e = b.weight_projector(h.max).mul_vec(&h.top_c());
    let diff: Vec<Cx<R>> = e.iter().map(|x| *x - x.conj()).collect();
    let low = b.weight_projector(h.min).mul_vec(&diff);
    let half = R::from_f64(0.5);
    let im: Vec<Cx<R>> = low.iter().map(|x| creal(x.im * half)).collect();
    Ok(bottom_coefficient(&im, &h.bottom_c(), h.mhs.tol())?.re)
}

/// `Im(v / (2πi)^2)`.
pub fn rho2<R: Real>(v: Cx<R>) -> R {
    let tau = R::pi() * R::from_f64(2.0);
    (v / creal(-(tau * tau))).im
}

#[derive(Clone, Debug, PartialEq)]
pub struct FunctorialityReport<R: Real> {
    pub d_max: R,
    pub d_min: R,
    pub height_a: R,
    pub height_b: R,
    pub residual: R,
}

/// Checks `Ht(A) d_min(f) = Ht(B) d_max(f)` for a morphism `f: A -> B`.
pub fn check_functoriality<R: Real>(f: &CMat<R>, a: &OrientedMhs<R>, b: &OrientedMhs<R>) -> Result<FunctorialityReport<R>> {
    let tol = a.mhs.tol().max(b.mhs.tol());
    if f.nrows() != b.mhs.dim() || f.ncols() != a.mhs.dim() {
        return Err(HodgeError::DimensionMismatch { expected: b.mhs.dim(), found: f.nrows() });
    }
    if a.max != b.max || a.min != b.min {
        return Err(HodgeError::NotAMorphism("extreme weights differ".into()));
    }
    let (wa, wb) = (a.mhs.weight(), b.mhs.weight());
    let keys: Vec<i32> = wa.steps().keys().chain(wb.steps().keys()).copied().collect();
    for &k in &keys {
        if !wa.to_complex::<R>(k).image(f, tol).is_subspace_of(&wb.to_complex(k), tol) {
            return Err(HodgeError::NotAMorphism(format!("W_{k} not preserved")));
        }
    }
    let levels: Vec<i32> = a.mhs.hodge().steps().keys().chain(b.mhs.hodge().steps().keys()).copied().collect();
    for &p in &levels {
        if !a.mhs.hodge().get(p).image(f, tol).is_subspace_of(&b.mhs.hodge().get(p), tol) {
            return Err(HodgeError::NotAMorphism(format!("F^{p} not preserved")));
        }
    }
    let bb = deligne_bigrading(&b.mhs)?;
    let top_image = bb.weight_projector(b.max).mul_vec(&f.mul_vec(&a.top_c()));
    let top_b = bb.weight_projector(b.max).mul_vec(&b.top_c());
    let d_max = bottom_coefficient(&top_image, &top_b, tol)?.re;
    let d_min = bottom_coefficient(&f.mul_vec(&a.bottom_c()), &b.bottom_c(), tol)?.re;
    let small = R::from_f64(tol);
    if d_max.abs() <= small || d_min.abs() <= small {
        return Err(HodgeError::NotInjectiveOnEnds);
    }
    let height_a = height(a)?;
    let height_b = height_with(b, &bb)?;
    let residual = (height_a * d_min - height_b * d_max).abs();
    Ok(FunctorialityReport { d_max, d_min, height_a, height_b, residual })
}

/// Dual structure with `⟨𝟙_H, 𝟙^∨_{H*}⟩ = 1` and `⟨𝟙^∨_H, 𝟙_{H*}⟩ = 1`.
pub fn dual_oriented<R: Real>(h: &OrientedMhs<R>) -> Result<OrientedMhs<R>> {
    let mhs = h.mhs.dual();
    let bottom = &h.orientation.bottom;
    let norm2: R = bottom.iter().map(|x| *x * *x).sum();
    let top: Vec<R> = bottom.iter().map(|x| *x / norm2).collect();
    let ann = h.mhs.weight().get(h.max - 1).annihilator(0.0);
    let mu: Vec<R> = ann.basis().row(0).iter().map(R::from_rational).collect();
    let pairing: R = mu.iter().zip(&h.orientation.top).map(|(x, y)| *x * *y).sum();
    let dual_bottom: Vec<R> = mu.iter().map(|x| *x / pairing).collect();
    OrientedMhs::new(mhs, Orientation::new(top, dual_bottom))
}

/// Complex conjugate structure. The generators are transported along
/// `𝟙(a) -> (-1)^a 𝟙(a)`, the action of conjugation on `(2πi)^a`.
pub fn conjugate_oriented<R: Real>(h: &OrientedMhs<R>) -> Result<OrientedMhs<R>> {
    let sign = |w: i32| if (w / 2) % 2 == 0 { R::one() } else { -R::one() };
    let (st, sb) = (sign(h.max), sign(h.min));
    let top = h.orientation.top.iter().map(|x| *x * st).collect();
    let bottom = h.orientation.bottom.iter().map(|x| *x * sb).collect();
    OrientedMhs::new(h.mhs.conjugate(), Orientation::new(top, bottom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dilog::d2;
    use crate::linalg::QMat;
    use crate::mhs::{HodgeFiltration, WeightFiltration};
    use crate::real::{cln, cxf, two_pi_i};
    use num_complex::Complex64;
    use std::f64::consts::PI;

    const TOL: f64 = 1e-9;

    /// Dilogarithm variation fiber at `s` in the integral basis `v0, v1, v2`,
    /// oriented by `v0` and `e2 = (2πi)^{-2} v2`.
    fn dilog_fiber(s: Complex64) -> OrientedMhs<f64> {
        let one = cxf(1.0, 0.0);
        let zero = cxf(0.0, 0.0);
        let t1: Complex64 = one / two_pi_i::<f64>();
        let t2 = t1 * t1;
        let (l1, ls) = (cln(one - s), cln(s));
        let li = crate::dilog::li2(s).value;
        let e0 = vec![one, t1 * l1, -t2 * (l1 * ls + li)];
        let e1 = vec![zero, t1, -t2 * ls];
        let e2 = vec![zero, zero, t2];
        let frame = CMat::from_columns(&[e0, e1, e2], 3);
        let w = WeightFiltration::from_coordinate_weights(&[0, -2, -4]);
        let f = HodgeFiltration::from_frame(&frame, &[0, -1, -2], TOL);
        let h = MixedHodgeStructure::new(w, f, TOL).unwrap();
        let bottom = vec![0.0, 0.0, -1.0 / (4.0 * PI * PI)];
        OrientedMhs::new(h, Orientation::new(vec![1.0, 0.0, 0.0], bottom)).unwrap()
    }

    #[test]
    fn dilog_fiber_height_is_minus_d2() {
        for s in [Complex64::new(2.0, 1.0), Complex64::new(0.3, -0.8), Complex64::new(-1.5, 0.2)] {
            let h = dilog_fiber(s);
            let ht = height(&h).unwrap();
            assert!((ht + d2(s)).abs() < 1e-12, "s={s} ht={ht}");
            assert!((height_biextension(&h).unwrap() - ht).abs() < 1e-12);
        }
    }

    #[test]
    fn dual_height_is_negated() {
        let h = dilog_fiber(Complex64::new(0.4, 0.9));
        let d = dual_oriented(&h).unwrap();
        assert!((height(&d).unwrap() + height(&h).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn conjugate_height_sign_law() {
        let h = dilog_fiber(Complex64::new(0.4, 0.9));
        let c = conjugate_oriented(&h).unwrap();
        let r = h.length() / 2;
        let sign = if (r + 1) % 2 == 0 { 1.0 } else { -1.0 };
        assert!((height(&c).unwrap() - sign * height(&h).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn rho2_values() {
        let tpi = two_pi_i::<f64>();
        assert!((rho2(tpi * tpi * cxf(0.0, 1.0)) - 1.0).abs() < 1e-15);
        assert_eq!(rho2(cxf::<f64>(3.0, 0.0)), 0.0);
        assert!((rho2(cxf::<f64>(0.0, 4.0 * PI * PI)) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn orbit_fiber_height_is_cubic() {
        let w = WeightFiltration::from_coordinate_weights(&[0, -3, -3, -6]);
        let n = QMat::from_ints(&[vec![0, 0, 0, 0], vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0]]).to_complex();
        let f0 = HodgeFiltration::from_frame(&CMat::identity(4), &[0, -1, -2, -3], TOL);
        for y in [0.5, 1.0, 2.0] {
            let z = cxf(0.25, y);
            let h = MixedHodgeStructure::new(w.clone(), f0.transform(&n.scale(&z).exp_nilpotent(), TOL), TOL).unwrap();
            let o = OrientedMhs::new(h, Orientation::coordinate(4, 0, 3)).unwrap();
            let ht: f64 = height(&o).unwrap();
            let expected = -2.0 / 3.0 * y * y * y;
            assert!((ht - expected).abs() < 1e-10 * (1.0 + expected.abs()), "y={y} ht={ht}");
            let log_s = -2.0 * PI * y;
            assert!((ht - log_s.powi(3) / (12.0 * PI.powi(3))).abs() < 1e-10 * (1.0 + expected.abs()));
        }
    }

    #[test]
    fn functoriality_identity_and_scaling() {
        let h = dilog_fiber(Complex64::new(1.5, 0.5));
        let id = CMat::identity(3);
        let r = check_functoriality(&id, &h, &h).unwrap();
        assert!((r.d_max - 1.0).abs() < 1e-14 && (r.d_min - 1.0).abs() < 1e-14 && r.residual < 1e-14);
        let r = check_functoriality(&id.scale(&cxf(3.0, 0.0)), &h, &h).unwrap();
        assert!((r.d_max - 3.0).abs() < 1e-12 && r.residual < 1e-12);
    }

    #[test]
    fn rejects_odd_or_wide_extremes() {
        let h = MixedHodgeStructure::<f64>::split_hodge_tate(&[(0, 0), (0, 0), (-1, -1)], TOL);
        assert!(matches!(OrientedMhs::new(h, Orientation::coordinate(3, 0, 2)), Err(HodgeError::NotOriented(_))));
    }
}
