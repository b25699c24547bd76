//! Nilpotent orbits, monodromy and relative weight filtrations, Deligne
//! systems and limit heights.
//!
//! Filtrations attached to `N` are computed exactly over `Q`; gradings and
//! splittings are computed at the working precision.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{HodgeError, Result};
use crate::height::Orientation;
use crate::linalg::{column_space, kernel, CMat, Mat, QMat, QSubspace};
use crate::mhs::{deligne_bigrading, eigen_projector, HodgeFiltration, MixedHodgeStructure, WeightFiltration};
use crate::real::{creal, cxf, Cx, Real};
use crate::splitting::splitting_from_bigrading;

fn nilpotent_order(n: &QMat) -> Result<usize> {
    n.nilpotency_index().ok_or(HodgeError::NotNilpotent)
}

/// `W(N)` centered at `center`: `N W_k ⊆ W_{k-2}` and
/// `N^j : Gr_{center+j} ≅ Gr_{center-j}`.
pub fn monodromy_weight_filtration(n: &QMat, center: i32) -> Result<WeightFiltration> {
    let dim = n.nrows();
    let m = nilpotent_order(n)?.saturating_sub(1) as i32;
    let powers: Vec<QMat> = (0..=2 * m as usize + 1).map(|j| n.pow(j)).collect();
    let kernels: Vec<QSubspace> = powers.iter().map(|p| kernel(p, 0.0)).collect();
    let images: Vec<QSubspace> = powers.iter().map(|p| column_space(p, 0.0)).collect();
    let mut steps = Vec::new();
    for k in -m..=m {
        let mut acc = QSubspace::zero(dim);
        for j in (-k).max(0)..=m {
            let piece = kernels[(k + 1 + j) as usize].intersect(&images[j as usize], 0.0)?;
            acc = acc.sum(&piece, 0.0)?;
        }
        steps.push((k + center, acc));
    }
    if steps.is_empty() {
        steps.push((center, QSubspace::full(dim)));
    }
    Ok(WeightFiltration::new(dim, steps)?.compressed())
}

/// Heads of Jordan chains: `(v, l)` with `N^l v != 0 = N^{l+1} v`, the
/// chains `v, Nv, ..., N^l v` forming a basis.
fn jordan_heads(n: &QMat) -> Result<Vec<(Vec<BigRational>, usize)>> {
    let d = n.nrows();
    if d == 0 {
        return Ok(Vec::new());
    }
    let m = nilpotent_order(n)?;
    let kernels: Vec<QSubspace> = (0..=m + 1).map(|j| kernel(&n.pow(j), 0.0)).collect();
    let mut heads = Vec::new();
    for l in (0..m).rev() {
        let mut cur = kernels[l].sum(&kernels[l + 2].image(n, 0.0), 0.0)?;
        for v in kernels[l + 1].basis_vectors() {
            if !cur.contains_vector(&v, 0.0) {
                cur = cur.sum(&QSubspace::span(std::slice::from_ref(&v), d, 0.0), 0.0)?;
                heads.push((v, l));
            }
        }
    }
    Ok(heads)
}

/// A complement of `a` in `b` (`a ⊆ b`), as ambient vectors.
fn complement(a: &QSubspace, b: &QSubspace) -> Result<Vec<Vec<BigRational>>> {
    let mut cur = a.clone();
    let mut out = Vec::new();
    for v in b.basis_vectors() {
        if !cur.contains_vector(&v, 0.0) {
            cur = cur.sum(&QSubspace::span(std::slice::from_ref(&v), a.ambient(), 0.0), 0.0)?;
            out.push(v);
        }
    }
    Ok(out)
}

/// `N` on `W_k / W_{k-1}` in the basis given by `comp`.
fn induced_on_quotient(n: &QMat, lower: &QSubspace, comp: &[Vec<BigRational>]) -> QMat {
    let dim = n.nrows();
    let mut cols = lower.basis_vectors();
    let low = cols.len();
    cols.extend(comp.iter().cloned());
    let frame = Mat::from_columns(&cols, dim);
    let d = comp.len();
    let mut out = QMat::zeros(d, d);
    for (j, c) in comp.iter().enumerate() {
        let coords = frame.solve(&n.mul_vec(c), 0.0).expect("N preserves W");
        for i in 0..d {
            out[(i, j)] = coords[low + i].clone();
        }
    }
    out
}

fn combine(vectors: &[Vec<BigRational>], coeffs: &[BigRational], dim: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); dim];
    for (v, c) in vectors.iter().zip(coeffs) {
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    out
}

fn preserves(n: &QMat, w: &WeightFiltration, shift: i32) -> bool {
    w.steps().iter().all(|(&k, s)| s.image(n, 0.0).is_subspace_of(&w.get(k - shift), 0.0))
}

/// The relative weight filtration `M(N, W)`, built piece by piece over the
/// jumps of `W` and verified afterwards.
pub fn relative_weight_filtration(n: &QMat, w: &WeightFiltration) -> Result<WeightFiltration> {
    let dim = n.nrows();
    nilpotent_order(n)?;
    if !preserves(n, w, 0) {
        return Err(HodgeError::InvalidVariation("N does not preserve W".into()));
    }
    let mut gens: Vec<(Vec<BigRational>, i32)> = Vec::new();
    for k in w.jumps() {
        let lower = w.get(k - 1);
        let comp = complement(&lower, &w.get(k))?;
        let nb = induced_on_quotient(n, &lower, &comp);
        let lower_basis = lower.basis_vectors();
        for (x, l) in jordan_heads(&nb)? {
            let mut v = combine(&comp, &x, dim);
            let nl = n.pow(l + 1);
            let target = k - l as i32 - 2;
            let m_target: Vec<Vec<BigRational>> =
                gens.iter().filter(|g| g.1 <= target).map(|g| g.0.clone()).collect();
            let mut cols: Vec<Vec<BigRational>> = lower_basis.iter().map(|a| nl.mul_vec(a)).collect();
            cols.extend(m_target.iter().map(|g| g.iter().map(|x| -x).collect()));
            let rhs: Vec<BigRational> = nl.mul_vec(&v).iter().map(|x| -x).collect();
            let alpha = if cols.is_empty() {
                rhs.iter().all(Zero::is_zero).then(Vec::new)
            } else {
                Mat::from_columns(&cols, dim).solve(&rhs, 0.0)
            };
            let Some(alpha) = alpha else {
                return Err(HodgeError::DoesNotExist(format!("no admissible lift for a chain of length {} in weight {k}", l + 1)));
            };
            let shift = combine(&lower_basis, &alpha[..lower_basis.len()], dim);
            for (vi, si) in v.iter_mut().zip(shift) {
                *vi += si;
            }
            let mut cur = v;
            for mm in 0..=l {
                gens.push((cur.clone(), k + l as i32 - 2 * mm as i32));
                cur = n.mul_vec(&cur);
            }
        }
    }
    let m = WeightFiltration::from_generators(dim, &gens);
    verify_relative(n, w, &m)?;
    Ok(m)
}

/// `N M_i ⊆ M_{i-2}` and `M` induces `W(N|Gr^W_k)[k]` on every `Gr^W_k`.
fn verify_relative(n: &QMat, w: &WeightFiltration, m: &WeightFiltration) -> Result<()> {
    let fail = |why: &str| Err(HodgeError::DoesNotExist(why.to_string()));
    if !m.steps().values().next_back().is_some_and(|s| s.is_full()) {
        return fail("M is not exhaustive");
    }
    if !preserves(n, m, 2) {
        return fail("N M_i is not contained in M_{i-2}");
    }
    let (Some(lo), Some(hi)) = (m.min_weight(), m.max_weight()) else {
        return Ok(());
    };
    for k in w.jumps() {
        let lower = w.get(k - 1);
        let wk = w.get(k);
        let comp = complement(&lower, &wk)?;
        let nb = induced_on_quotient(n, &lower, &comp);
        let local = monodromy_weight_filtration(&nb, k)?;
        for i in lo - 1..=hi {
            let lifted: Vec<Vec<BigRational>> =
                local.get(i).basis_vectors().iter().map(|x| combine(&comp, x, n.nrows())).collect();
            let expected = QSubspace::span(&lifted, n.nrows(), 0.0).sum(&lower, 0.0)?;
            let induced = m.get(i).intersect(&wk, 0.0)?.sum(&lower, 0.0)?;
            if !induced.same_as(&expected, 0.0) {
                return fail(&format!("induced filtration on Gr^W_{k} differs at index {i}"));
            }
        }
    }
    Ok(())
}

/// The data of a Deligne system `(W, N, Y)` together with the grading `Y'`
/// of `W` and the `sl_2`-triple `(N₀, H, N₀⁺)`.
#[derive(Clone, Debug)]
pub struct DeligneSystem<R: Real> {
    pub y: CMat<R>,
    pub y_prime: CMat<R>,
    /// `j -> N_{-j}`, the part of `N` of `ad Y'`-weight `-j`.
    pub n_components: BTreeMap<i32, CMat<R>>,
    pub n0: CMat<R>,
    pub h: CMat<R>,
    pub n0_plus: CMat<R>,
    /// Largest bracket-identity residual.
    pub residual: f64,
}

/// Part of `x` of `ad y`-weight `m`, where `y` has the integer spectrum `spec`.
pub fn ad_weight_component<R: Real>(x: &CMat<R>, y: &CMat<R>, spec: &[i32], m: i32) -> CMat<R> {
    let n = x.nrows();
    let mut out = CMat::zeros(n, n);
    for &k in spec {
        if spec.contains(&(k + m)) {
            let term = &(&eigen_projector(y, k + m, spec) * x) * &eigen_projector(y, k, spec);
            out = &out + &term;
        }
    }
    out
}

/// Matrix of a linear operator on `gl(n)` whose value is a list of matrices,
/// one equation block per list entry.
fn operator_matrix<R: Real>(n: usize, f: impl Fn(&CMat<R>) -> Vec<CMat<R>>) -> CMat<R> {
    let mut columns: Vec<Vec<Cx<R>>> = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let mut e = CMat::zeros(n, n);
            e[(a, b)] = cxf(1.0, 0.0);
            columns.push(f(&e).iter().flat_map(|m| m.rows_vec().into_iter().flatten()).collect());
        }
    }
    let rows = columns.first().map_or(0, Vec::len);
    CMat::from_columns(&columns, rows)
}

fn flatten<R: Real>(ms: &[CMat<R>]) -> Vec<Cx<R>> {
    ms.iter().flat_map(|m| m.rows_vec().into_iter().flatten()).collect()
}

fn unflatten<R: Real>(v: &[Cx<R>], n: usize) -> CMat<R> {
    CMat::from_fn(n, n, |i, j| v[i * n + j])
}

/// `N₀⁺` with `[N₀⁺, N₀] = H` and `[H, N₀⁺] = 2 N₀⁺`.
fn sl2_completion<R: Real>(n0: &CMat<R>, h: &CMat<R>, tol: f64) -> Result<CMat<R>> {
    let n = n0.nrows();
    let two = cxf(2.0, 0.0);
    let op = operator_matrix(n, |x| vec![x.commutator(n0), &h.commutator(x) - &x.scale(&two)]);
    let rhs = flatten(&[h.clone(), CMat::zeros(n, n)]);
    op.solve(&rhs, tol)
        .map(|v| unflatten(&v, n))
        .ok_or_else(|| HodgeError::ConstructionFailed("no sl2 completion of (N0, H)".into()))
}

fn spectrum_weights(w: &WeightFiltration) -> Vec<i32> {
    w.jumps()
}

/// Initial grading of `W` commuting with `Y`: inside each eigenspace of `Y`
/// take a basis adapted to the trace of `W`.
fn initial_grading<R: Real>(w: &WeightFiltration, y: &CMat<R>, y_spec: &[i32], tol: f64) -> Result<CMat<R>> {
    let n = y.nrows();
    let mut columns = Vec::with_capacity(n);
    let mut diag = Vec::with_capacity(n);
    for &m in y_spec {
        let eigenspace = column_space(&eigen_projector(y, m, y_spec), tol);
        let mut cur = crate::linalg::CSubspace::<R>::zero(n);
        for k in w.jumps() {
            let piece = w.to_complex::<R>(k).intersect(&eigenspace, tol)?;
            for v in piece.basis_vectors() {
                if !cur.contains_vector(&v, tol) {
                    cur = cur.sum(&crate::linalg::CSubspace::span(std::slice::from_ref(&v), n, tol), tol)?;
                    columns.push(v);
                    diag.push(creal(R::from_i64(k as i64)));
                }
            }
        }
    }
    if columns.len() != n {
        return Err(HodgeError::ConstructionFailed("Y does not preserve W".into()));
    }
    let frame = CMat::from_columns(&columns, n);
    let inv = frame.inverse().ok_or_else(|| HodgeError::ConstructionFailed("singular adapted frame".into()))?;
    Ok(&(&frame * &Mat::diagonal(&diag)) * &inv)
}

/// The unique grading `Y'` of `W` commuting with `Y` such that the weight-0
/// part `N₀` of `N` extends to an `sl_2`-triple with `H = Y - Y'` and
/// `[N - N₀, N₀⁺] = 0`. `Y` must grade `M(N, W)`.
pub fn deligne_system_grading<R: Real>(w: &WeightFiltration, n: &QMat, y: &CMat<R>, tol: f64) -> Result<DeligneSystem<R>> {
    let dim = n.nrows();
    let m = relative_weight_filtration(n, w)?;
    let y_spec = m.jumps();
    let w_spec = spectrum_weights(w);
    let nc: CMat<R> = n.to_complex();
    let trivial_on_graded = preserves(n, w, 1);
    let mut y_prime = if trivial_on_graded { y.clone() } else { initial_grading(w, y, &y_spec, tol)? };
    let depth = match (w_spec.first(), w_spec.last()) {
        (Some(lo), Some(hi)) => hi - lo,
        _ => 0,
    };
    if !trivial_on_graded {
        for j in 1..=depth {
            let n0 = ad_weight_component(&nc, &y_prime, &w_spec, 0);
            let nj = ad_weight_component(&nc, &y_prime, &w_spec, -j);
            let h = y - &y_prime;
            let n0p = sl2_completion(&n0, &h, tol)?;
            let jc = cxf(j as f64, 0.0);
            let op = operator_matrix(dim, |u| {
                vec![&y_prime.commutator(u) + &u.scale(&jc), y.commutator(u), n0p.commutator(&n0.commutator(u))]
            });
            let rhs = flatten(&[CMat::zeros(dim, dim), CMat::zeros(dim, dim), -&n0p.commutator(&nj)]);
            let scale = y.max_abs().max(nc.max_abs()).max(1.0);
            if rhs.iter().all(|z| crate::real::cabs(*z).to_f64() <= tol * scale) {
                continue;
            }
            let u = op
                .solve(&rhs, tol)
                .map(|v| unflatten(&v, dim))
                .ok_or_else(|| HodgeError::ConstructionFailed(format!("no correction at depth {j}")))?;
            y_prime = &(&u.exp_nilpotent() * &y_prime) * &(-&u).exp_nilpotent();
        }
    }
    let mut n_components = BTreeMap::new();
    for j in 0..=depth {
        let c = ad_weight_component(&nc, &y_prime, &w_spec, -j);
        if !c.is_zero() {
            n_components.insert(j, c);
        }
    }
    let n0 = n_components.get(&0).cloned().unwrap_or_else(|| CMat::zeros(dim, dim));
    let h = y - &y_prime;
    let n0_plus = if trivial_on_graded { CMat::zeros(dim, dim) } else { sl2_completion(&n0, &h, tol)? };
    let system = DeligneSystem { y: y.clone(), y_prime, n_components, n0, h, n0_plus, residual: 0.0 };
    let residual = system_residual(&system, &nc, w);
    let scale = y.max_abs().max(nc.max_abs()).max(1.0);
    if residual > tol.sqrt() * scale {
        return Err(HodgeError::ConstructionFailed(format!("bracket residual {residual:e}")));
    }
    Ok(DeligneSystem { residual, ..system })
}

/// Largest residual among the defining identities of a Deligne system.
pub fn system_residual<R: Real>(s: &DeligneSystem<R>, n: &CMat<R>, w: &WeightFiltration) -> f64 {
    let two = cxf(2.0, 0.0);
    let mut r: f64 = s.y.commutator(&s.y_prime).max_abs();
    let total = s.n_components.values().fold(CMat::zeros(n.nrows(), n.nrows()), |acc, c| &acc + c);
    r = r.max(total.max_abs_diff(n));
    for (&j, c) in &s.n_components {
        r = r.max((&s.y_prime.commutator(c) + &c.scale(&cxf(j as f64, 0.0))).max_abs());
    }
    r = r.max((&s.h.commutator(&s.n0) + &s.n0.scale(&two)).max_abs());
    r = r.max(s.n0_plus.commutator(&s.n0).max_abs_diff(&s.h));
    r = r.max((&s.h.commutator(&s.n0_plus) - &s.n0_plus.scale(&two)).max_abs());
    r = r.max((n - &s.n0).commutator(&s.n0_plus).max_abs());
    for k in w.jumps() {
        // (Y' - k) W_k must pair to zero with the annihilator of W_{k-1}
        let shifted = &s.y_prime - &CMat::identity(n.nrows()).scale(&creal(R::from_i64(k as i64)));
        let wk: crate::linalg::CSubspace<R> = w.to_complex(k);
        let ann = w.get(k - 1).annihilator(0.0).to_complex::<R>();
        for v in wk.basis_vectors() {
            let img = shifted.mul_vec(&v);
            for alpha in ann.basis_vectors() {
                let pairing = alpha.iter().zip(&img).fold(cxf::<R>(0.0, 0.0), |acc, (a, b)| acc + *a * *b);
                r = r.max(crate::real::cabs(pairing).to_f64());
            }
        }
    }
    r
}

/// `(e^{zN} F_∞, W)` for a rational nilpotent `N` preserving `W`.
#[derive(Clone, Debug)]
pub struct NilpotentOrbit<R: Real> {
    pub w: WeightFiltration,
    pub n: QMat,
    pub f_inf: HodgeFiltration<R>,
    pub tol: f64,
}

impl<R: Real> NilpotentOrbit<R> {
    pub fn new(w: WeightFiltration, n: QMat, f_inf: HodgeFiltration<R>, tol: f64) -> Result<Self> {
        let dim = w.ambient();
        if n.nrows() != dim || n.ncols() != dim || f_inf.ambient() != dim {
            return Err(HodgeError::DimensionMismatch { expected: dim, found: n.nrows() });
        }
        nilpotent_order(&n)?;
        if !preserves(&n, &w, 0) {
            return Err(HodgeError::InvalidVariation("N does not preserve W".into()));
        }
        let nc: CMat<R> = n.to_complex();
        for (&p, s) in f_inf.steps() {
            if !s.image(&nc, tol).is_subspace_of(&f_inf.get(p - 1), tol) {
                return Err(HodgeError::InvalidVariation(format!("N is not horizontal at F^{p}")));
            }
        }
        Ok(Self { w, n, f_inf, tol })
    }

    pub fn dim(&self) -> usize {
        self.w.ambient()
    }

    pub fn n_complex(&self) -> CMat<R> {
        self.n.to_complex()
    }

    /// `(e^{zN} F_∞, W)`; validity is checked by the consumer.
    pub fn fiber(&self, z: Cx<R>) -> Result<MixedHodgeStructure<R>> {
        let g = self.n_complex().scale(&z).exp_nilpotent();
        MixedHodgeStructure::new(self.w.clone(), self.f_inf.transform(&g, self.tol), self.tol)
    }

    /// Same orbit with `F_∞` replaced by `e^{λN} F_∞`.
    pub fn translate(&self, lambda: Cx<R>) -> Self {
        let g = self.n_complex().scale(&lambda).exp_nilpotent();
        Self { f_inf: self.f_inf.transform(&g, self.tol), ..self.clone() }
    }

    pub fn relative_weight(&self) -> Result<WeightFiltration> {
        relative_weight_filtration(&self.n, &self.w)
    }

    /// The limit structure `(F_∞, M(N, W))`.
    pub fn limit_mhs(&self) -> Result<MixedHodgeStructure<R>> {
        let m = self.relative_weight()?;
        let h = MixedHodgeStructure::new(m, self.f_inf.clone(), self.tol)?;
        deligne_bigrading(&h)?;
        Ok(h)
    }

    /// The Deligne system of the limit structure.
    pub fn deligne_system(&self) -> Result<DeligneSystem<R>> {
        let lim = self.limit_mhs()?;
        let b = deligne_bigrading(&lim)?;
        deligne_system_grading(&self.w, &self.n, b.y(), self.tol)
    }

    /// `δ_{-ℓ}(e) = Ht · e^∨` with `δ` the splitting of the limit structure,
    /// decomposed by `ad Y'`.
    pub fn limit_height(&self, orientation: &Orientation<R>) -> Result<R> {
        let (Some(lo), Some(hi)) = (self.w.min_weight(), self.w.max_weight()) else {
            return Err(HodgeError::NotOriented("empty weight filtration".into()));
        };
        if (hi - lo) % 2 != 0 || self.w.graded_dim(hi) != 1 || self.w.graded_dim(lo) != 1 {
            return Err(HodgeError::NotOriented("extreme graded pieces must have rank 1 and even length".into()));
        }
        let lim = self.limit_mhs()?;
        let b = deligne_bigrading(&lim)?;
        let s = splitting_from_bigrading(&b, self.tol)?;
        let sys = deligne_system_grading(&self.w, &self.n, b.y(), self.tol)?;
        let spec = self.w.jumps();
        let d = ad_weight_component(&s.delta, &sys.y_prime, &spec, lo - hi);
        let top: Vec<Cx<R>> = orientation.top.iter().map(|&x| creal(x)).collect();
        let image = d.mul_vec(&top);
        let bottom = &orientation.bottom;
        let norm2: R = bottom.iter().map(|x| *x * *x).sum();
        if norm2 == R::zero() {
            return Err(HodgeError::ZeroBottomPairing(0.0));
        }
        let c: R = image.iter().zip(bottom).map(|(z, b)| z.re * *b).sum::<R>() / norm2;
        Ok(c)
    }
}
