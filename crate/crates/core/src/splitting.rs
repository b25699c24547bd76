//! The Deligne splitting `δ` of a mixed Hodge structure: the unique real
//! element of `Λ^{-1,-1}` with `Ȳ = e^{-2iδ} Y e^{2iδ}`.

use std::collections::BTreeMap;

use crate::error::{HodgeError, Result};
use crate::linalg::CMat;
use crate::mhs::{deligne_bigrading, DeligneBigrading, MixedHodgeStructure};
use crate::real::{cxf, Real};

#[derive(Clone, Debug)]
pub struct Splitting<R: Real> {
    /// Real matrix (imaginary parts are exactly zero).
    pub delta: CMat<R>,
    /// Nonzero components `δ^{a,b}`; all have `a < 0` and `b < 0`.
    pub hodge_components: BTreeMap<(i32, i32), CMat<R>>,
    /// `max |e^{-2iδ} Y e^{2iδ} - Ȳ|`.
    pub residual: f64,
}

/// All bidegree components of `m` with respect to the bigrading.
pub fn gl_hodge_components<R: Real>(b: &DeligneBigrading<R>, m: &CMat<R>) -> BTreeMap<(i32, i32), CMat<R>> {
    b.hodge_components(m, 0.0)
}

pub fn deligne_delta<R: Real>(h: &MixedHodgeStructure<R>) -> Result<Splitting<R>> {
    let b = deligne_bigrading(h)?;
    splitting_from_bigrading(&b, h.tol())
}

/// Fixed-point solver. With `u = -2iδ` the defining relation reads
/// `e^{-u} Ȳ e^{u} = Y`; the `ad Y`-weight `-j` part of the mismatch is
/// removed by adding it divided by `j`, which clears one weight per sweep.
pub fn splitting_from_bigrading<R: Real>(b: &DeligneBigrading<R>, tol: f64) -> Result<Splitting<R>> {
    let n = b.dim();
    let y = b.y();
    let ybar = y.conj();
    let weights = b.weights();
    let depth = match (weights.first(), weights.last()) {
        (Some(lo), Some(hi)) => (hi - lo) as usize,
        _ => 0,
    };
    let scale = y.max_abs().max(1.0);
    let mut u = CMat::<R>::zeros(n, n);
    let mut residual = f64::INFINITY;
    for _ in 0..=depth + 3 {
        let r = &(&(-&u).exp_nilpotent() * &(&ybar * &u.exp_nilpotent())) - y;
        residual = r.max_abs();
        if residual <= tol * scale {
            break;
        }
        for j in 1..=depth as i32 {
            let part = b.weight_component(&r, -j);
            u = &u + &part.scale(&cxf(1.0 / j as f64, 0.0));
        }
    }
    if residual > tol * scale {
        return Err(HodgeError::NoConvergence(residual));
    }
    finish(b, u.scale(&cxf(0.0, 0.5)), tol)
}

/// Independent solver: `g = Σ_k conj(Π_k) Π_k` is the unique unipotent
/// element with `g Y g^{-1} = Ȳ`, so `δ = (i/2) log g`.
pub fn delta_via_log<R: Real>(b: &DeligneBigrading<R>, tol: f64) -> Result<Splitting<R>> {
    let n = b.dim();
    let mut g = CMat::<R>::zeros(n, n);
    for k in b.weights() {
        let p = b.weight_projector(k);
        g = &g + &(&p.conj() * &p);
    }
    let u = g.log_unipotent();
    finish(b, u.scale(&cxf(0.0, 0.5)), tol)
}

fn finish<R: Real>(b: &DeligneBigrading<R>, delta: CMat<R>, tol: f64) -> Result<Splitting<R>> {
    let scale = delta.max_abs().max(1.0);
    let imag = delta.max_imag();
    if imag > tol.sqrt() * scale {
        return Err(HodgeError::NoConvergence(imag));
    }
    let delta = delta.re();
    let hodge_components = b.hodge_components(&delta, tol);
    if let Some(((p, q), m)) = hodge_components.iter().find(|((p, q), _)| *p >= 0 || *q >= 0) {
        if m.max_abs() > tol.sqrt() * scale {
            return Err(HodgeError::InvalidBlockType(*p, *q));
        }
    }
    let y = b.y();
    let two_i = cxf(0.0, 2.0);
    let lhs = &(&(-&delta.scale(&two_i)).exp_nilpotent() * y) * &delta.scale(&two_i).exp_nilpotent();
    let residual = lhs.max_abs_diff(&y.conj());
    Ok(Splitting { delta, hodge_components, residual })
}
