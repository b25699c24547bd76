//! Local period maps `F(z, s) = e^{N(z)} e^{Γ(s)} F_∞` near a normal
//! crossing boundary point, height sweeps and asymptotic checks.
//!
//! `z` and `s` are independent inputs; sweep drivers apply
//! `s_j = e^{2πi z_j}` themselves.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{HodgeError, Result};
use crate::height::{height_with, OrientedMhs, Orientation};
use crate::limits::NilpotentOrbit;
use crate::linalg::{CMat, QMat};
use crate::mhs::{deligne_bigrading, HodgeFiltration, MixedHodgeStructure, WeightFiltration};
use crate::real::{cexp, creal, cx, cxf, Cx, Real};
use crate::splitting::splitting_from_bigrading;

/// One monomial `s^e · G` of the holomorphic correction `Γ(s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaTerm<R: Real> {
    pub exponents: Vec<u32>,
    pub matrix: CMat<R>,
}

#[derive(Clone, Debug)]
pub struct LocalVariation<R: Real> {
    pub w: WeightFiltration,
    pub f_inf: HodgeFiltration<R>,
    pub nilpotents: Vec<QMat>,
    pub gamma: Vec<GammaTerm<R>>,
    pub orientation: Orientation<R>,
    pub tol: f64,
}

impl<R: Real> LocalVariation<R> {
    /// Checks commutativity of the `N_j`, `Γ(0) = 0` and tameness
    /// (`s_j` divides `[N_j, Γ(s)]`).
    pub fn new(
        w: WeightFiltration,
        f_inf: HodgeFiltration<R>,
        nilpotents: Vec<QMat>,
        gamma: Vec<GammaTerm<R>>,
        orientation: Orientation<R>,
        tol: f64,
    ) -> Result<Self> {
        let dim = w.ambient();
        let k = nilpotents.len();
        for (a, na) in nilpotents.iter().enumerate() {
            if na.nrows() != dim || na.ncols() != dim {
                return Err(HodgeError::DimensionMismatch { expected: dim, found: na.nrows() });
            }
            for nb in &nilpotents[a + 1..] {
                if !na.commutator(nb).is_zero() {
                    return Err(HodgeError::InvalidVariation("nilpotents do not commute".into()));
                }
            }
        }
        let mut merged: BTreeMap<Vec<u32>, CMat<R>> = BTreeMap::new();
        for t in &gamma {
            if t.exponents.len() != k {
                return Err(HodgeError::InvalidVariation(format!("monomial has {} exponents, expected {k}", t.exponents.len())));
            }
            if t.exponents.iter().all(|&e| e == 0) {
                return Err(HodgeError::InvalidVariation("Gamma(0) must vanish".into()));
            }
            let slot = merged.entry(t.exponents.clone()).or_insert_with(|| CMat::zeros(dim, dim));
            *slot = &*slot + &t.matrix;
        }
        for (exps, g) in &merged {
            for (j, nj) in nilpotents.iter().enumerate() {
                if exps[j] == 0 {
                    let c = nj.to_complex::<R>().commutator(g);
                    if c.max_abs() > tol * g.max_abs().max(1.0) {
                        return Err(HodgeError::InvalidVariation(format!("tameness fails for N_{j}")));
                    }
                }
            }
        }
        Ok(Self { w, f_inf, nilpotents, gamma, orientation, tol })
    }

    pub fn dim(&self) -> usize {
        self.w.ambient()
    }

    pub fn len(&self) -> usize {
        self.nilpotents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nilpotents.is_empty()
    }

    /// `N(x) = Σ x_j N_j`.
    pub fn n_of(&self, x: &[Cx<R>]) -> CMat<R> {
        let dim = self.dim();
        self.nilpotents.iter().zip(x).fold(CMat::zeros(dim, dim), |acc, (n, c)| &acc + &n.to_complex::<R>().scale(c))
    }

    pub fn gamma_at(&self, s: &[Cx<R>]) -> CMat<R> {
        let dim = self.dim();
        let mut out = CMat::zeros(dim, dim);
        for t in &self.gamma {
            let mut c = cxf(1.0, 0.0);
            for (sj, &e) in s.iter().zip(&t.exponents) {
                for _ in 0..e {
                    c = c * *sj;
                }
            }
            out = &out + &t.matrix.scale(&c);
        }
        out
    }

    fn check_point(&self, z: &[Cx<R>], s: &[Cx<R>]) -> Result<()> {
        if z.len() != self.len() || s.len() != self.len() {
            return Err(HodgeError::DimensionMismatch { expected: self.len(), found: z.len().min(s.len()) });
        }
        Ok(())
    }

    /// `(e^{N(z)} e^{Γ(s)} F_∞, W)`.
    pub fn fiber(&self, z: &[Cx<R>], s: &[Cx<R>]) -> Result<MixedHodgeStructure<R>> {
        self.check_point(z, s)?;
        let g = &self.n_of(z).exp_nilpotent() * &self.gamma_at(s).exp_nilpotent();
        let h = MixedHodgeStructure::new(self.w.clone(), self.f_inf.transform(&g, self.tol), self.tol)?;
        deligne_bigrading(&h)?;
        Ok(h)
    }

    pub fn oriented_fiber(&self, z: &[Cx<R>], s: &[Cx<R>]) -> Result<OrientedMhs<R>> {
        OrientedMhs::new(self.fiber(z, s)?, self.orientation.clone())
    }

    pub fn fiber_height(&self, z: &[Cx<R>], s: &[Cx<R>]) -> Result<R> {
        let h = self.oriented_fiber(z, s)?;
        let b = deligne_bigrading(&h.mhs)?;
        height_with(&h, &b)
    }

    /// Nilpotent orbit of the cone element `N_1 + ... + N_k`.
    pub fn orbit(&self) -> Result<NilpotentOrbit<R>> {
        let dim = self.dim();
        let n = self.nilpotents.iter().fold(QMat::zeros(dim, dim), |acc, m| &acc + m);
        NilpotentOrbit::new(self.w.clone(), n, self.f_inf.clone(), self.tol)
    }

    pub fn limit_height(&self) -> Result<R> {
        self.orbit()?.limit_height(&self.orientation)
    }

    /// `δ^{-1,-1}` of the fiber, relative to the bigrading of `(F_∞, W)`, minus
    /// `N(Im z) + Im(Γ(s))^{-1,-1} + δ_∞^{-1,-1}`.
    pub fn identity_residual(&self, z: &[Cx<R>], s: &[Cx<R>]) -> Result<f64> {
        let lim = MixedHodgeStructure::new(self.w.clone(), self.f_inf.clone(), self.tol)?;
        let bl = deligne_bigrading(&lim)?;
        let delta_inf = splitting_from_bigrading(&bl, self.tol)?.delta;
        let fiber = self.fiber(z, s)?;
        let bf = deligne_bigrading(&fiber)?;
        let delta = splitting_from_bigrading(&bf, self.tol)?.delta;
        let im_z: Vec<Cx<R>> = z.iter().map(|c| creal(c.im)).collect();
        let gamma = self.gamma_at(s);
        let im_gamma = (&gamma - &gamma.conj()).scale(&cx(R::zero(), -R::from_f64(0.5)));
        let lhs = bl.hodge_component(&delta, -1, -1);
        let rhs = &(&self.n_of(&im_z) + &bl.hodge_component(&im_gamma, -1, -1)) + &bl.hodge_component(&delta_inf, -1, -1);
        Ok(lhs.max_abs_diff(&rhs))
    }
}

/// One sampled fiber of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint<R: Real> {
    pub index: usize,
    pub height: R,
    /// `None` when the identity is not applicable (not Hodge–Tate).
    pub identity_residual: Option<f64>,
}

fn is_hodge_tate<R: Real>(v: &LocalVariation<R>) -> bool {
    MixedHodgeStructure::new(v.w.clone(), v.f_inf.clone(), v.tol)
        .ok()
        .and_then(|h| deligne_bigrading(&h).ok())
        .is_some_and(|b| b.is_hodge_tate())
}

/// A point `(z, s)` of the base.
pub type PathPoint<R> = (Vec<Cx<R>>, Vec<Cx<R>>);

/// Heights along a path of `(z, s)` points, computed in parallel and
/// returned in path order.
pub fn height_sweep<R: Real>(v: &LocalVariation<R>, path: &[PathPoint<R>]) -> Result<Vec<SweepPoint<R>>> {
    let hodge_tate = is_hodge_tate(v);
    path.par_iter()
        .enumerate()
        .map(|(index, (z, s))| {
            let wrap = |e: HodgeError| HodgeError::PathPoint { index, source: Box::new(e) };
            let height = v.fiber_height(z, s).map_err(wrap)?;
            let identity_residual = if hodge_tate { Some(v.identity_residual(z, s).map_err(wrap)?) } else { None };
            Ok(SweepPoint { index, height, identity_residual })
        })
        .collect()
}

/// `s_j = e^{2πi z_j}`.
pub fn covering<R: Real>(z: &[Cx<R>]) -> Vec<Cx<R>> {
    let tau = R::pi() * R::from_f64(2.0);
    z.iter().map(|c| cexp(cx(-tau * c.im, tau * c.re))).collect()
}

/// Points `z_j = x + i y` (the same in every variable) with `s = e^{2πiz}`.
pub fn ray<R: Real>(k: usize, x: R, ys: &[R]) -> Vec<PathPoint<R>> {
    ys.iter()
        .map(|&y| {
            let z = vec![cx(x, y); k];
            let s = covering(&z);
            (z, s)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticPoint<R: Real> {
    pub z: Vec<Cx<R>>,
    pub height: R,
    pub height_difference: R,
    pub identity_residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticsReport<R: Real> {
    pub limit_height: R,
    pub points: Vec<AsymptoticPoint<R>>,
    pub max_identity_residual: f64,
}

/// Heights against the limit height, and the `δ^{-1,-1}` identity, along a
/// sequence of points. Requires a Hodge–Tate variation of length at least 4.
pub fn check_asymptotics<R: Real>(v: &LocalVariation<R>, sequence: &[PathPoint<R>]) -> Result<AsymptoticsReport<R>> {
    if !is_hodge_tate(v) {
        return Err(HodgeError::NotHodgeTate);
    }
    let length = match (v.w.max_weight(), v.w.min_weight()) {
        (Some(hi), Some(lo)) => hi - lo,
        _ => 0,
    };
    if length < 4 {
        return Err(HodgeError::LengthTooSmall(length));
    }
    let limit_height = v.limit_height()?;
    let points = sequence
        .par_iter()
        .enumerate()
        .map(|(index, (z, s))| {
            let wrap = |e: HodgeError| HodgeError::PathPoint { index, source: Box::new(e) };
            let height = v.fiber_height(z, s).map_err(wrap)?;
            let identity_residual = v.identity_residual(z, s).map_err(wrap)?;
            Ok(AsymptoticPoint { z: z.clone(), height, height_difference: (height - limit_height).abs(), identity_residual })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_identity_residual = points.iter().map(|p| p.identity_residual).fold(0.0, f64::max);
    Ok(AsymptoticsReport { limit_height, points, max_identity_residual })
}

/// Least-squares fit `Ht ≈ c0 + c1 L + c3 L^3` with `L = log|s|`, for
/// diagnostics. Returns `(c0, c1, c3)`.
pub fn fit_log_growth(samples: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    let mut ata = [[0.0f64; 3]; 3];
    let mut atb = [0.0f64; 3];
    for &(l, h) in samples {
        let row = [1.0, l, l * l * l];
        for i in 0..3 {
            atb[i] += row[i] * h;
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    let m = CMat::<f64>::from_fn(3, 3, |i, j| cxf(ata[i][j], 0.0));
    let x = m.solve(&atb.map(|b| cxf(b, 0.0)), 1e-14)?;
    Some((x[0].re, x[1].re, x[2].re))
}
