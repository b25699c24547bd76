//! Generalized biextensions (at most three weights) built from and reduced
//! to their splitting invariants `δ₁`, `δ₂` and the height slot.
//!
//! Reference coordinates are `(top, middle..., bottom)`. A middle type
//! `(p,p)` takes one real coordinate; a type `(p,q)` with `p > q` takes two
//! real coordinates `u, w` with `I^{p,q} = C(u + iw)` and `I^{q,p} = C(u - iw)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HodgeError, Result};
use crate::height::{Orientation, OrientedMhs};
use crate::linalg::{CMat, CSubspace};
use crate::mhs::{deligne_bigrading, eigen_projector, HodgeFiltration, MixedHodgeStructure, WeightFiltration};
use crate::real::{creal, cxf, Cx, Real};
use crate::splitting::splitting_from_bigrading;

/// One isotypic block of the middle graded piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MiddleType {
    pub p: i32,
    pub q: i32,
    pub multiplicity: usize,
}

impl MiddleType {
    /// Real coordinates used by this block.
    pub fn real_dim(&self) -> usize {
        if self.p == self.q {
            self.multiplicity
        } else {
            2 * self.multiplicity
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BiextensionSpec<R: Real> {
    /// `(2a, b, 2c)`.
    pub weights: (i32, i32, i32),
    /// Types with `p >= q`, in coordinate order.
    pub middle: Vec<MiddleType>,
    /// Block `Gr_{2a} -> Gr_b`, one entry per middle coordinate.
    pub delta1: Vec<R>,
    /// Block `Gr_b -> Gr_{2c}`, one entry per middle coordinate.
    pub delta2: Vec<R>,
    pub ht: R,
}

impl<R: Real> BiextensionSpec<R> {
    pub fn middle_dim(&self) -> usize {
        self.middle.iter().map(MiddleType::real_dim).sum()
    }

    pub fn dim(&self) -> usize {
        self.middle_dim() + 2
    }

    /// Hodge type of each middle coordinate, pairs reported as `(p,q)`.
    fn coordinate_types(&self) -> Vec<(i32, i32)> {
        self.middle.iter().flat_map(|t| std::iter::repeat_n((t.p, t.q), t.real_dim())).collect()
    }

    fn check(&self) -> Result<()> {
        let (top, b, bottom) = self.weights;
        if top % 2 != 0 || bottom % 2 != 0 || top <= b || b <= bottom {
            return Err(HodgeError::InvalidSpec(format!("weights {:?} must satisfy 2a > b > 2c", self.weights)));
        }
        for t in &self.middle {
            if t.p + t.q != b || t.p < t.q || t.multiplicity == 0 {
                return Err(HodgeError::InvalidSpec(format!("middle type ({},{}) x{}", t.p, t.q, t.multiplicity)));
            }
        }
        let m = self.middle_dim();
        if self.delta1.len() != m || self.delta2.len() != m {
            return Err(HodgeError::DimensionMismatch { expected: m, found: self.delta1.len().max(self.delta2.len()) });
        }
        let (a, c) = (top / 2, bottom / 2);
        for ((p, q), (d1, d2)) in self.coordinate_types().into_iter().zip(self.delta1.iter().zip(&self.delta2)) {
            if *d1 != R::zero() && !(p < a && q < a) {
                return Err(HodgeError::InvalidBlockType(p - a, q - a));
            }
            if *d2 != R::zero() && !(p > c && q > c) {
                return Err(HodgeError::InvalidBlockType(c - p, c - q));
            }
        }
        Ok(())
    }

    /// The real matrix `δ` in reference coordinates.
    pub fn delta_matrix(&self) -> CMat<R> {
        let n = self.dim();
        let mut d = CMat::zeros(n, n);
        for i in 0..self.middle_dim() {
            d[(i + 1, 0)] = creal(self.delta1[i]);
            d[(n - 1, i + 1)] = creal(self.delta2[i]);
        }
        d[(n - 1, 0)] = creal(self.ht);
        d
    }

    /// Largest entry difference, `0` when the shapes agree exactly.
    pub fn max_difference(&self, other: &Self) -> f64 {
        if self.weights != other.weights || self.middle != other.middle {
            return f64::INFINITY;
        }
        let diff = |x: &[R], y: &[R]| x.iter().zip(y).map(|(a, b)| (*a - *b).abs().to_f64()).fold(0.0, f64::max);
        diff(&self.delta1, &other.delta1)
            .max(diff(&self.delta2, &other.delta2))
            .max((self.ht - other.ht).abs().to_f64())
    }
}

/// Split real reference structure and its adapted frame.
fn reference<R: Real>(spec: &BiextensionSpec<R>) -> (WeightFiltration, CMat<R>, Vec<i32>) {
    let n = spec.dim();
    let (top, b, bottom) = spec.weights;
    let mut weights = vec![top];
    weights.extend(std::iter::repeat_n(b, spec.middle_dim()));
    weights.push(bottom);
    let w = WeightFiltration::from_coordinate_weights(&weights);
    let mut columns: Vec<Vec<Cx<R>>> = Vec::with_capacity(n);
    let mut levels = Vec::with_capacity(n);
    let unit = |i: usize, c: Cx<R>| {
        let mut v = vec![cxf(0.0, 0.0); n];
        v[i] = c;
        v
    };
    columns.push(unit(0, cxf(1.0, 0.0)));
    levels.push(top / 2);
    let mut idx = 1;
    for t in &spec.middle {
        for _ in 0..t.multiplicity {
            if t.p == t.q {
                columns.push(unit(idx, cxf(1.0, 0.0)));
                levels.push(t.p);
                idx += 1;
            } else {
                let mut plus = unit(idx, cxf(1.0, 0.0));
                plus[idx + 1] = cxf(0.0, 1.0);
                let mut minus = unit(idx, cxf(1.0, 0.0));
                minus[idx + 1] = cxf(0.0, -1.0);
                columns.push(plus);
                levels.push(t.p);
                columns.push(minus);
                levels.push(t.q);
                idx += 2;
            }
        }
    }
    columns.push(unit(n - 1, cxf(1.0, 0.0)));
    levels.push(bottom / 2);
    (w, CMat::from_columns(&columns, n), levels)
}

/// `(e^{iδ} F₀, W)` oriented by the first and last coordinate vectors.
pub fn build_biextension<R: Real>(spec: &BiextensionSpec<R>, tol: f64) -> Result<OrientedMhs<R>> {
    spec.check()?;
    let n = spec.dim();
    let (w, frame, levels) = reference(spec);
    let g = spec.delta_matrix().scale(&cxf(0.0, 1.0)).exp_nilpotent();
    let f = HodgeFiltration::from_frame(&(&g * &frame), &levels, tol);
    let mhs = MixedHodgeStructure::new(w, f, tol)?;
    OrientedMhs::new(mhs, Orientation::coordinate(n, 0, n - 1))
}

/// Reads off `δ₁`, `δ₂` and the height slot in a real frame adapted to the
/// split structure `(e^{-iδ} F, W)`.
pub fn extract_invariants<R: Real>(h: &OrientedMhs<R>) -> Result<BiextensionSpec<R>> {
    let tol = h.mhs.tol();
    let b = deligne_bigrading(&h.mhs)?;
    let weights = b.weights();
    if weights.len() > 3 {
        return Err(HodgeError::NotGeneralizedBiextension(format!("{} nonzero weights", weights.len())));
    }
    let (top, bottom) = (h.max_weight(), h.min_weight());
    let s = splitting_from_bigrading(&b, tol)?;
    let n = h.mhs.dim();
    let i_delta = s.delta.scale(&cxf(0.0, 1.0));
    let (g, g_inv) = (i_delta.exp_nilpotent(), (-&i_delta).exp_nilpotent());
    let y0 = &(&g_inv * b.y()) * &g;
    let p_top = eigen_projector(&y0, top, &weights);
    let t0: Vec<Cx<R>> = p_top.mul_vec(&h.top_c()).iter().map(|z| creal(z.re)).collect();
    let middle_weight = weights.iter().copied().find(|&k| k != top && k != bottom);
    let mut columns = vec![t0];
    let mut middle: Vec<MiddleType> = Vec::new();
    if let Some(mw) = middle_weight {
        let mut types: Vec<(i32, i32)> = b.components().keys().copied().filter(|(p, q)| p + q == mw && p >= q).collect();
        types.sort_by_key(|t| std::cmp::Reverse(t.0));
        for (p, q) in types {
            let split = b.component(p, q).unwrap().image(&g_inv, tol);
            let rows = CSubspace::echelonize(split.basis(), tol).basis_vectors();
            for r in &rows {
                columns.push(r.iter().map(|z| creal(z.re)).collect());
                if p != q {
                    columns.push(r.iter().map(|z| creal(z.im)).collect());
                }
            }
            middle.push(MiddleType { p, q, multiplicity: rows.len() });
        }
    }
    columns.push(h.bottom_c());
    let frame = CMat::from_columns(&columns, n);
    let inv = frame.inverse().ok_or_else(|| HodgeError::NotGeneralizedBiextension("degenerate adapted frame".into()))?;
    let d = &(&inv * &s.delta) * &frame;
    let m = n - 2;
    let spec = BiextensionSpec {
        weights: (top, middle_weight.unwrap_or((top + bottom) / 2), bottom),
        middle,
        delta1: (0..m).map(|i| d[(i + 1, 0)].re).collect(),
        delta2: (0..m).map(|i| d[(n - 1, i + 1)].re).collect(),
        ht: d[(n - 1, 0)].re,
    };
    Ok(spec)
}

/// Random valid spec with at most `max_dim` coordinates. Blocks of a
/// forbidden Hodge type are zero.
pub fn random_spec<R: Real>(rng: &mut impl Rng, max_dim: usize) -> BiextensionSpec<R> {
    let a: i32 = rng.random_range(-1..=1);
    let c = a - rng.random_range(1..=3);
    let b: i32 = rng.random_range(2 * c + 1..2 * a);
    let mut middle: Vec<MiddleType> = Vec::new();
    let mut budget = max_dim.saturating_sub(2);
    let lowest = b.div_euclid(2) + b.rem_euclid(2);
    for p in (lowest..=a + 1).rev() {
        let q = b - p;
        let cost = if p == q { 1 } else { 2 };
        if budget < cost || rng.random_bool(0.4) {
            continue;
        }
        let mult = rng.random_range(1..=(budget / cost).min(2));
        budget -= mult * cost;
        middle.push(MiddleType { p, q, multiplicity: mult });
    }
    let b = if middle.is_empty() { a + c } else { b };
    let mut spec = BiextensionSpec { weights: (2 * a, b, 2 * c), middle, delta1: vec![], delta2: vec![], ht: R::zero() };
    let types = spec.coordinate_types();
    let mut val = |ok: bool| if ok { R::from_f64(rng.random_range(-2.0..2.0)) } else { R::zero() };
    spec.delta1 = types.iter().map(|&(p, q)| val(p < a && q < a)).collect();
    spec.delta2 = types.iter().map(|&(p, q)| val(p > c && q > c)).collect();
    spec.ht = val(true);
    spec
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::height::{dual_oriented, height, height_biextension};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    const TOL: f64 = 1e-9;

    fn dim0_spec(a: f64, b: f64) -> BiextensionSpec<f64> {
        let (la, lb) = (a.abs().ln() / (2.0 * PI), b.abs().ln() / (2.0 * PI));
        BiextensionSpec {
            weights: (0, -2, -4),
            middle: vec![MiddleType { p: -1, q: -1, multiplicity: 2 }],
            delta1: vec![la, lb],
            delta2: vec![lb, la],
            ht: 0.0,
        }
    }

    #[test]
    fn zero_spec_is_split() {
        let mut s = dim0_spec(1.0, 1.0);
        s.delta1 = vec![0.0, 0.0];
        s.delta2 = vec![0.0, 0.0];
        let h = build_biextension(&s, TOL).unwrap();
        assert_eq!(height(&h).unwrap(), 0.0);
        let e = extract_invariants(&h).unwrap();
        assert!(e.max_difference(&s) < 1e-14);
    }

    #[test]
    fn dim0_round_trip() {
        let s = dim0_spec(2.0, 3.0);
        let h = build_biextension(&s, TOL).unwrap();
        let e = extract_invariants(&h).unwrap();
        assert!(e.max_difference(&s) < 1e-12, "{e:?}");
        assert!((e.delta1[0] - 2f64.ln() / (2.0 * PI)).abs() < 1e-12);
        assert!(height(&h).unwrap().abs() < 1e-12);
    }

    #[test]
    fn random_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let s = random_spec::<f64>(&mut rng, 8);
            let h = build_biextension(&s, TOL).unwrap();
            let e = extract_invariants(&h).unwrap();
            assert!(e.max_difference(&s) < 1e-10, "{s:?} vs {e:?}");
            assert!((height(&h).unwrap() - s.ht).abs() < 1e-10);
            assert!((height_biextension(&h).unwrap() - s.ht).abs() < 1e-10);
            assert!((height(&dual_oriented(&h).unwrap()).unwrap() + s.ht).abs() < 1e-10);
        }
    }

    #[test]
    fn forbidden_block_is_rejected() {
        let s = BiextensionSpec {
            weights: (0, -1, -2),
            middle: vec![MiddleType { p: 0, q: -1, multiplicity: 1 }],
            delta1: vec![1.0, 0.0],
            delta2: vec![0.0, 0.0],
            ht: 0.5,
        };
        assert!(matches!(build_biextension(&s, TOL), Err(HodgeError::InvalidBlockType(..))));
    }
}
