//! Mixed Hodge structures on `Q^n`, their Deligne bigrading and the
//! functorial constructions (Tate twist, dual, complex conjugate).
//!
//! The rational structure is the coordinate basis, so complex conjugation
//! of a subspace is entrywise conjugation of its basis.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use std::fmt;
use std::ops::Range;

use crate::error::{HodgeError, Result};
use crate::linalg::{q, CMat, CSubspace, Mat, QSubspace};
use crate::real::{creal, cxf, Cx, Real};

/// Increasing rational filtration stored at its jump indices.
/// `W_k` resolves to the stored subspace with the largest index `<= k`,
/// or zero below the first index.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightFiltration {
    ambient: usize,
    steps: BTreeMap<i32, QSubspace>,
}

impl WeightFiltration {
    pub fn new(ambient: usize, steps: impl IntoIterator<Item = (i32, QSubspace)>) -> Result<Self> {
        let steps: BTreeMap<i32, QSubspace> = steps.into_iter().collect();
        for s in steps.values() {
            if s.ambient() != ambient {
                return Err(HodgeError::DimensionMismatch { expected: ambient, found: s.ambient() });
            }
        }
        Ok(Self { ambient, steps })
    }

    /// The filtration with a single jump: `W_k = V` for `k >= weight`.
    pub fn pure(ambient: usize, weight: i32) -> Self {
        Self { ambient, steps: BTreeMap::from([(weight, QSubspace::full(ambient))]) }
    }

    /// Filtration by coordinate flags: `W_k` is spanned by the coordinates
    /// whose assigned weight is at most `k`.
    pub fn from_coordinate_weights(weights: &[i32]) -> Self {
        let n = weights.len();
        let mut ks: Vec<i32> = weights.to_vec();
        ks.sort_unstable();
        ks.dedup();
        let steps = ks.into_iter().map(|k| {
            let idx: Vec<usize> = (0..n).filter(|&i| weights[i] <= k).collect();
            (k, QSubspace::coordinate(n, &idx))
        });
        Self { ambient: n, steps: steps.collect() }
    }

    /// `W_k` spanned by the generators of weight `<= k`.
    pub fn from_generators(ambient: usize, generators: &[(Vec<BigRational>, i32)]) -> Self {
        let mut ks: Vec<i32> = generators.iter().map(|g| g.1).collect();
        ks.sort_unstable();
        ks.dedup();
        let steps = ks.into_iter().map(|k| {
            let rows: Vec<Vec<BigRational>> = generators.iter().filter(|g| g.1 <= k).map(|g| g.0.clone()).collect();
            (k, QSubspace::span(&rows, ambient, 0.0))
        });
        Self { ambient, steps: steps.collect() }.compressed()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn steps(&self) -> &BTreeMap<i32, QSubspace> {
        &self.steps
    }

    pub fn get(&self, k: i32) -> QSubspace {
        self.steps
            .range(..=k)
            .next_back()
            .map(|(_, s)| s.clone())
            .unwrap_or_else(|| QSubspace::zero(self.ambient))
    }

    pub fn dim(&self, k: i32) -> usize {
        self.steps.range(..=k).next_back().map_or(0, |(_, s)| s.dim())
    }

    /// Weights `k` with `Gr^W_k != 0`, ascending.
    pub fn jumps(&self) -> Vec<i32> {
        let mut out = Vec::new();
        let mut prev = 0;
        for (&k, s) in &self.steps {
            if s.dim() > prev {
                out.push(k);
            }
            prev = prev.max(s.dim());
        }
        out
    }

    pub fn min_weight(&self) -> Option<i32> {
        self.jumps().first().copied()
    }

    pub fn max_weight(&self) -> Option<i32> {
        self.jumps().last().copied()
    }

    pub fn graded_dim(&self, k: i32) -> usize {
        self.dim(k) - self.dim(k - 1)
    }

    /// Nested and exhaustive: returns the first violation.
    pub fn check(&self) -> std::result::Result<(), Axiom> {
        let mut prev: Option<&QSubspace> = None;
        for s in self.steps.values() {
            if let Some(p) = prev {
                if !p.is_subspace_of(s, 0.0) {
                    return Err(Axiom::WeightNested);
                }
            }
            prev = Some(s);
        }
        match self.steps.values().next_back() {
            Some(top) if top.is_full() => Ok(()),
            None if self.ambient == 0 => Ok(()),
            _ => Err(Axiom::WeightExhaustive),
        }
    }

    /// Removes indices whose subspace equals the previous one.
    pub(crate) fn compressed(self) -> Self {
        let mut steps = BTreeMap::new();
        let mut prev: Option<usize> = None;
        for (k, s) in self.steps {
            if prev != Some(s.dim()) {
                prev = Some(s.dim());
                steps.insert(k, s);
            }
        }
        Self { ambient: self.ambient, steps }
    }

    pub fn shifted(&self, by: i32) -> Self {
        Self { ambient: self.ambient, steps: self.steps.iter().map(|(k, s)| (k + by, s.clone())).collect() }
    }

    /// Dual filtration `W*_k = ann(W_{-k-1})` on the dual space.
    pub fn dual(&self) -> Self {
        let keys: Vec<i32> = self.steps.keys().map(|j| -j).collect();
        let steps = keys.into_iter().map(|k| (k, self.get(-k - 1).annihilator(0.0)));
        Self { ambient: self.ambient, steps: steps.collect() }.compressed()
    }

    pub fn to_complex<R: Real>(&self, k: i32) -> CSubspace<R> {
        self.get(k).to_complex()
    }
}

/// Decreasing complex filtration stored at its jump indices.
/// `F^p` resolves to the stored subspace with the smallest index `>= p`,
/// or zero above the last index.
#[derive(Clone, Debug, PartialEq)]
pub struct HodgeFiltration<R: Real> {
    ambient: usize,
    steps: BTreeMap<i32, CSubspace<R>>,
}

impl<R: Real> HodgeFiltration<R> {
    pub fn new(ambient: usize, steps: impl IntoIterator<Item = (i32, CSubspace<R>)>) -> Result<Self> {
        let steps: BTreeMap<i32, CSubspace<R>> = steps.into_iter().collect();
        for s in steps.values() {
            if s.ambient() != ambient {
                return Err(HodgeError::DimensionMismatch { expected: ambient, found: s.ambient() });
            }
        }
        Ok(Self { ambient, steps })
    }

    /// `F^p` spanned by the columns of `frame` with Hodge level `>= p`.
    pub fn from_frame(frame: &CMat<R>, levels: &[i32], tol: f64) -> Self {
        let n = frame.nrows();
        let mut ps: Vec<i32> = levels.to_vec();
        ps.sort_unstable();
        ps.dedup();
        let steps = ps.into_iter().map(|p| {
            let cols: Vec<Vec<Cx<R>>> =
                (0..levels.len()).filter(|&j| levels[j] >= p).map(|j| frame.column(j)).collect();
            (p, CSubspace::span(&cols, n, tol))
        });
        Self { ambient: n, steps: steps.collect() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn steps(&self) -> &BTreeMap<i32, CSubspace<R>> {
        &self.steps
    }

    pub fn get(&self, p: i32) -> CSubspace<R> {
        self.steps
            .range(p..)
            .next()
            .map(|(_, s)| s.clone())
            .unwrap_or_else(|| CSubspace::zero(self.ambient))
    }

    /// Smallest stored level (where the filtration is the whole space).
    pub fn min_level(&self) -> Option<i32> {
        self.steps.keys().next().copied()
    }

    /// Largest level with nonzero `F^p`.
    pub fn max_level(&self) -> Option<i32> {
        self.steps.iter().rev().find(|(_, s)| !s.is_zero()).map(|(&p, _)| p)
    }

    pub fn check(&self, tol: f64) -> std::result::Result<(), Axiom> {
        let mut prev: Option<&CSubspace<R>> = None;
        for s in self.steps.values().rev() {
            if let Some(p) = prev {
                if !p.is_subspace_of(s, tol) {
                    return Err(Axiom::HodgeNested);
                }
            }
            prev = Some(s);
        }
        match self.steps.values().next() {
            Some(bottom) if bottom.is_full() => Ok(()),
            None if self.ambient == 0 => Ok(()),
            _ => Err(Axiom::HodgeExhaustive),
        }
    }

    pub fn conj(&self) -> Self {
        Self { ambient: self.ambient, steps: self.steps.iter().map(|(&p, s)| (p, s.conj())).collect() }
    }

    pub fn shifted(&self, by: i32) -> Self {
        Self { ambient: self.ambient, steps: self.steps.iter().map(|(p, s)| (p + by, s.clone())).collect() }
    }

    /// Image under an invertible linear map `g`.
    pub fn transform(&self, g: &CMat<R>, tol: f64) -> Self {
        Self { ambient: self.ambient, steps: self.steps.iter().map(|(&p, s)| (p, s.image(g, tol))).collect() }
    }

    /// Dual filtration `F*^p = ann(F^{1-p})`.
    pub fn dual(&self, tol: f64) -> Self {
        let keys: Vec<i32> = self.steps.keys().map(|p| -p).collect();
        let steps = keys.into_iter().map(|p| (p, self.get(1 - p).annihilator(tol)));
        Self { ambient: self.ambient, steps: steps.collect() }
    }
}

/// The axioms checked by [`MixedHodgeStructure::validate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    WeightNested,
    WeightExhaustive,
    HodgeNested,
    HodgeExhaustive,
    DirectSum,
    ReproducesHodge,
    ReproducesWeight,
    ConjugationSymmetry,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::WeightNested => "weight filtration not nested",
            Axiom::WeightExhaustive => "weight filtration not exhaustive",
            Axiom::HodgeNested => "Hodge filtration not nested",
            Axiom::HodgeExhaustive => "Hodge filtration not exhaustive",
            Axiom::DirectSum => "bigrading is not a direct sum decomposition",
            Axiom::ReproducesHodge => "bigrading does not reproduce F",
            Axiom::ReproducesWeight => "bigrading does not reproduce W",
            Axiom::ConjugationSymmetry => "conj(I^{p,q}) is not I^{q,p} modulo lower terms",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub axiom: Axiom,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub ok: bool,
    pub failures: Vec<Failure>,
}

/// A mixed Hodge structure `(F, W)` on `Q^dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedHodgeStructure<R: Real> {
    dim: usize,
    w: WeightFiltration,
    f: HodgeFiltration<R>,
    tol: f64,
}

impl<R: Real> MixedHodgeStructure<R> {
    /// Assembles the data; axioms are checked by [`Self::validate`].
    pub fn new(w: WeightFiltration, f: HodgeFiltration<R>, tol: f64) -> Result<Self> {
        if w.ambient() != f.ambient() {
            return Err(HodgeError::DimensionMismatch { expected: w.ambient(), found: f.ambient() });
        }
        Ok(Self { dim: w.ambient(), w, f, tol })
    }

    /// Split structure with coordinate vector `i` in `I^{p_i, q_i}` where
    /// `types[i] = (p_i, q_i)`. Only valid over Q when each type is `(p,p)`;
    /// pairs of conjugate types need [`Self::split_from_frame`].
    pub fn split_hodge_tate(types: &[(i32, i32)], tol: f64) -> Self {
        let n = types.len();
        let w = WeightFiltration::from_coordinate_weights(&types.iter().map(|(p, q)| p + q).collect::<Vec<_>>());
        let levels: Vec<i32> = types.iter().map(|t| t.0).collect();
        let f = HodgeFiltration::from_frame(&CMat::identity(n), &levels, tol);
        Self { dim: n, w, f, tol }
    }

    /// Structure whose bigrading is spanned by the columns of `frame`, with
    /// column `j` of Hodge type `types[j]`, over the weight filtration `w`.
    pub fn split_from_frame(w: WeightFiltration, frame: &CMat<R>, types: &[(i32, i32)], tol: f64) -> Result<Self> {
        let levels: Vec<i32> = types.iter().map(|t| t.0).collect();
        let f = HodgeFiltration::from_frame(frame, &levels, tol);
        Self::new(w, f, tol)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weight(&self) -> &WeightFiltration {
        &self.w
    }

    pub fn hodge(&self) -> &HodgeFiltration<R> {
        &self.f
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// `(g F, W)` for an automorphism `g` (the caller guarantees that `g`
    /// preserves `W`).
    pub fn transform_hodge(&self, g: &CMat<R>) -> Self {
        Self { dim: self.dim, w: self.w.clone(), f: self.f.transform(g, self.tol), tol: self.tol }
    }

    pub fn with_weight(&self, w: WeightFiltration) -> Result<Self> {
        Self::new(w, self.f.clone(), self.tol)
    }

    /// Runs every axiom check; on success the bigrading is returned too.
    pub fn analyze(&self) -> (ValidationReport, Option<DeligneBigrading<R>>) {
        let mut failures = Vec::new();
        if let Err(a) = self.w.check() {
            push(&mut failures, a, String::new());
        }
        if let Err(a) = self.f.check(self.tol) {
            push(&mut failures, a, String::new());
        }
        if !failures.is_empty() {
            return (ValidationReport { ok: false, failures }, None);
        }
        let components = match self.bigrading_components() {
            Ok(c) => c,
            Err(e) => {
                push(&mut failures, Axiom::DirectSum, e.to_string());
                return (ValidationReport { ok: false, failures }, None);
            }
        };
        let total: usize = components.values().map(|s| s.dim()).sum();
        if total != self.dim {
            push(&mut failures, Axiom::DirectSum, format!("component dimensions sum to {total}, expected {}", self.dim));
            return (ValidationReport { ok: false, failures }, None);
        }
        let bigrading = match DeligneBigrading::from_components(self.dim, components) {
            Some(b) => b,
            None => {
                push(&mut failures, Axiom::DirectSum, "components are linearly dependent".into());
                return (ValidationReport { ok: false, failures }, None);
            }
        };
        let tol = self.tol;
        for (&p, fp) in self.f.steps() {
            let sum = bigrading.span_where(|a, _| a >= p, tol);
            if !sum.same_as(fp, tol) {
                push(&mut failures, Axiom::ReproducesHodge, format!("level {p}"));
            }
        }
        for &k in self.w.steps().keys() {
            let sum = bigrading.span_where(|a, b| a + b <= k, tol);
            if !sum.same_as(&self.w.to_complex(k), tol) {
                push(&mut failures, Axiom::ReproducesWeight, format!("weight {k}"));
            }
        }
        for (&(p, q), s) in bigrading.components() {
            let partner = bigrading.components().get(&(q, p)).map_or(0, |t| t.dim());
            let allowed = bigrading.span_where(|a, b| (a, b) == (q, p) || (a < q && b < p), tol);
            if partner != s.dim() || !s.conj().is_subspace_of(&allowed, tol) {
                push(&mut failures, Axiom::ConjugationSymmetry, format!("type ({p},{q})"));
            }
        }
        let ok = failures.is_empty();
        (ValidationReport { ok, failures }, ok.then_some(bigrading))
    }

    pub fn validate(&self) -> ValidationReport {
        self.analyze().0
    }

    /// `I^{a,b} = F^a ∩ W_{a+b} ∩ (conj(F^b) ∩ W_{a+b} + conj(U^{b-1}_{a+b-2}))`
    /// with `U^r_s = Σ_{j>=0} F^{r-j} ∩ W_{s-j}`.
    fn bigrading_components(&self) -> Result<BTreeMap<(i32, i32), CSubspace<R>>> {
        let tol = self.tol;
        let (Some(fmin), Some(fmax)) = (self.f.min_level(), self.f.max_level()) else {
            return Ok(BTreeMap::new());
        };
        let jumps = self.w.jumps();
        let wc = |k: i32| self.w.to_complex::<R>(k);
        let u = |r: i32, s: i32| -> Result<CSubspace<R>> {
            let mut acc = CSubspace::zero(self.dim);
            let mut j = 0;
            loop {
                let wk = wc(s - j);
                if wk.is_zero() {
                    break;
                }
                let fr = self.f.get(r - j);
                acc = acc.sum(&fr.intersect(&wk, tol)?, tol)?;
                if fr.is_full() {
                    break;
                }
                j += 1;
            }
            Ok(acc)
        };
        let mut out = BTreeMap::new();
        for a in fmin..=fmax {
            let fa = self.f.get(a);
            for &k in &jumps {
                let b = k - a;
                if b < fmin || b > fmax {
                    continue;
                }
                let wk = wc(k);
                let left = fa.intersect(&wk, tol)?;
                if left.is_zero() {
                    continue;
                }
                let right = self.f.get(b).conj().intersect(&wk, tol)?.sum(&u(b - 1, k - 2)?.conj(), tol)?;
                let i_ab = left.intersect(&right, tol)?;
                if !i_ab.is_zero() {
                    out.insert((a, b), i_ab);
                }
            }
        }
        Ok(out)
    }

    /// Tate twist by `a`: `W(a)_k = W_{k+2a}`, `F(a)^p = F^{p+a}`.
    pub fn tate_twist(&self, a: i32) -> Self {
        Self { dim: self.dim, w: self.w.shifted(-2 * a), f: self.f.shifted(-a), tol: self.tol }
    }

    /// Dual structure on the dual space, in the dual coordinate basis.
    pub fn dual(&self) -> Self {
        Self { dim: self.dim, w: self.w.dual(), f: self.f.dual(self.tol), tol: self.tol }
    }

    /// Entrywise complex conjugation of `F`.
    pub fn conjugate(&self) -> Self {
        Self { dim: self.dim, w: self.w.clone(), f: self.f.conj(), tol: self.tol }
    }
}

/// Lagrange projector onto the `k`-eigenspace of a semisimple `y` with
/// integer eigenvalues `spectrum`.
pub fn eigen_projector<R: Real>(y: &CMat<R>, k: i32, spectrum: &[i32]) -> CMat<R> {
    let n = y.nrows();
    let mut p = CMat::identity(n);
    for &j in spectrum {
        if j != k {
            let shifted = y - &CMat::identity(n).scale(&creal(R::from_i64(j as i64)));
            p = &p * &shifted.scale(&creal(R::one() / R::from_i64((k - j) as i64)));
        }
    }
    p
}

fn push(failures: &mut Vec<Failure>, axiom: Axiom, detail: String) {
    failures.push(Failure { axiom, detail });
}

/// Computes the Deligne bigrading, failing with `NotAnMhs` if any axiom breaks.
pub fn deligne_bigrading<R: Real>(h: &MixedHodgeStructure<R>) -> Result<DeligneBigrading<R>> {
    match h.analyze() {
        (_, Some(b)) => Ok(b),
        (report, None) => Err(HodgeError::NotAnMhs(
            report.failures.iter().map(|f| format!("{} {}", f.axiom, f.detail).trim().to_string()).collect::<Vec<_>>().join("; "),
        )),
    }
}

/// The spaces `I^{p,q}` together with the associated projectors.
#[derive(Clone, Debug)]
pub struct DeligneBigrading<R: Real> {
    dim: usize,
    components: BTreeMap<(i32, i32), CSubspace<R>>,
    ranges: BTreeMap<(i32, i32), Range<usize>>,
    frame: CMat<R>,
    frame_inv: CMat<R>,
    y: CMat<R>,
}

impl<R: Real> DeligneBigrading<R> {
    fn from_components(dim: usize, components: BTreeMap<(i32, i32), CSubspace<R>>) -> Option<Self> {
        let mut columns = Vec::with_capacity(dim);
        let mut ranges = BTreeMap::new();
        for (&key, s) in &components {
            let start = columns.len();
            columns.extend(s.basis_vectors());
            ranges.insert(key, start..columns.len());
        }
        let frame = Mat::from_columns(&columns, dim);
        let frame_inv = frame.inverse()?;
        let mut diag = vec![creal(R::zero()); dim];
        for (&(p, q), r) in &ranges {
            for i in r.clone() {
                diag[i] = creal(R::from_i64((p + q) as i64));
            }
        }
        let y = &(&frame * &Mat::diagonal(&diag)) * &frame_inv;
        Some(Self { dim, components, ranges, frame, frame_inv, y })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &BTreeMap<(i32, i32), CSubspace<R>> {
        &self.components
    }

    pub fn component(&self, p: i32, q: i32) -> Option<&CSubspace<R>> {
        self.components.get(&(p, q))
    }

    /// Basis of `V_C` adapted to the bigrading, one column per vector.
    pub fn frame(&self) -> &CMat<R> {
        &self.frame
    }

    /// The Deligne grading `Y`, acting by `p+q` on `I^{p,q}`.
    pub fn y(&self) -> &CMat<R> {
        &self.y
    }

    /// Weights with nonzero graded piece, ascending.
    pub fn weights(&self) -> Vec<i32> {
        let mut ks: Vec<i32> = self.components.keys().map(|(p, q)| p + q).collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    }

    pub fn is_hodge_tate(&self) -> bool {
        self.components.keys().all(|(p, q)| p == q)
    }

    /// Projector onto the sum of the `I^{p,q}` selected by `pred`, along the
    /// others.
    pub fn projector_where(&self, pred: impl Fn(i32, i32) -> bool) -> CMat<R> {
        let idx: Vec<usize> = self
            .ranges
            .iter()
            .filter(|(&(p, q), _)| pred(p, q))
            .flat_map(|(_, r)| r.clone())
            .collect();
        let all: Vec<usize> = (0..self.dim).collect();
        if idx.is_empty() {
            return CMat::zeros(self.dim, self.dim);
        }
        &self.frame.submatrix(&all, &idx) * &self.frame_inv.submatrix(&idx, &all)
    }

    /// `Π_{p,q}`.
    pub fn projector(&self, p: i32, q: i32) -> CMat<R> {
        self.projector_where(|a, b| (a, b) == (p, q))
    }

    /// `Π_k`, the projector onto the `Y`-eigenspace of weight `k`.
    pub fn weight_projector(&self, k: i32) -> CMat<R> {
        self.projector_where(|a, b| a + b == k)
    }

    pub fn span_where(&self, pred: impl Fn(i32, i32) -> bool, tol: f64) -> CSubspace<R> {
        let vecs: Vec<Vec<Cx<R>>> = self
            .components
            .iter()
            .filter(|(&(p, q), _)| pred(p, q))
            .flat_map(|(_, s)| s.basis_vectors())
            .collect();
        CSubspace::span(&vecs, self.dim, tol)
    }

    /// Bidegree-`(a,b)` component `Σ_{(c,d)} Π_{a+c,b+d} M Π_{c,d}`.
    pub fn hodge_component(&self, m: &CMat<R>, a: i32, b: i32) -> CMat<R> {
        let mut out = CMat::zeros(self.dim, self.dim);
        for &(c, d) in self.components.keys() {
            if self.components.contains_key(&(a + c, b + d)) {
                let term = &(&self.projector(a + c, b + d) * m) * &self.projector(c, d);
                out = &out + &term;
            }
        }
        out
    }

    /// All bidegree components whose largest entry exceeds `tol * max(1, |M|)`.
    pub fn hodge_components(&self, m: &CMat<R>, tol: f64) -> BTreeMap<(i32, i32), CMat<R>> {
        let keys: Vec<(i32, i32)> = self.components.keys().copied().collect();
        let projectors: BTreeMap<(i32, i32), CMat<R>> = keys.iter().map(|&(p, q)| ((p, q), self.projector(p, q))).collect();
        let mut out: BTreeMap<(i32, i32), CMat<R>> = BTreeMap::new();
        for &(c, d) in &keys {
            for &(e, f) in &keys {
                let term = &(&projectors[&(e, f)] * m) * &projectors[&(c, d)];
                let slot = out.entry((e - c, f - d)).or_insert_with(|| CMat::zeros(self.dim, self.dim));
                *slot = &*slot + &term;
            }
        }
        let cutoff = tol * m.max_abs().max(1.0);
        out.retain(|_, v| v.max_abs() > cutoff);
        out
    }

    /// Part of `M` of `ad Y`-weight `m`: `Σ_k Π_{k+m} M Π_k`.
    pub fn weight_component(&self, m_mat: &CMat<R>, m: i32) -> CMat<R> {
        let mut out = CMat::zeros(self.dim, self.dim);
        let ws = self.weights();
        for &k in &ws {
            if ws.contains(&(k + m)) {
                out = &out + &(&(&self.weight_projector(k + m) * m_mat) * &self.weight_projector(k));
            }
        }
        out
    }
}

/// Direct sum on `V_A ⊕ V_B`, with `V_A` in the leading coordinates.
pub fn direct_sum<R: Real>(a: &MixedHodgeStructure<R>, b: &MixedHodgeStructure<R>) -> Result<MixedHodgeStructure<R>> {
    let (na, nb) = (a.dim(), b.dim());
    let n = na + nb;
    let pad_q = |s: &QSubspace, offset: usize| -> Vec<Vec<BigRational>> {
        s.basis_vectors()
            .into_iter()
            .map(|v| {
                let mut out = vec![q(0); n];
                for (i, x) in v.into_iter().enumerate() {
                    out[offset + i] = x;
                }
                out
            })
            .collect()
    };
    let pad_c = |s: &CSubspace<R>, offset: usize| -> Vec<Vec<Cx<R>>> {
        s.basis_vectors()
            .into_iter()
            .map(|v| {
                let mut out = vec![cxf(0.0, 0.0); n];
                for (i, x) in v.into_iter().enumerate() {
                    out[offset + i] = x;
                }
                out
            })
            .collect()
    };
    let tol = a.tol().max(b.tol());
    let wkeys: BTreeSet<i32> = a.weight().steps().keys().chain(b.weight().steps().keys()).copied().collect();
    let w = WeightFiltration::new(
        n,
        wkeys.into_iter().map(|k| {
            let mut rows = pad_q(&a.weight().get(k), 0);
            rows.extend(pad_q(&b.weight().get(k), na));
            (k, QSubspace::span(&rows, n, 0.0))
        }),
    )?;
    let fkeys: BTreeSet<i32> = a.hodge().steps().keys().chain(b.hodge().steps().keys()).copied().collect();
    let f = HodgeFiltration::new(
        n,
        fkeys.into_iter().map(|p| {
            let mut rows = pad_c(&a.hodge().get(p), 0);
            rows.extend(pad_c(&b.hodge().get(p), na));
            (p, CSubspace::span(&rows, n, tol))
        }),
    )?;
    MixedHodgeStructure::new(w, f, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, QMat};
    use crate::real::{cxf, two_pi_i};

    const TOL: f64 = 1e-9;

    fn tate(a: i32) -> MixedHodgeStructure<f64> {
        MixedHodgeStructure::split_hodge_tate(&[(-a, -a)], TOL)
    }

    #[test]
    fn tate_structure_is_valid_with_one_component() {
        let h = tate(0);
        assert!(h.validate().ok);
        let b = deligne_bigrading(&h).unwrap();
        assert_eq!(b.components().keys().copied().collect::<Vec<_>>(), vec![(0, 0)]);
        let h3 = tate(3);
        let b3 = deligne_bigrading(&h3).unwrap();
        assert!(b3.component(-3, -3).unwrap().is_full());
        assert_eq!(b3.y()[(0, 0)], cxf(-6.0, 0.0));
    }

    #[test]
    fn twist_moves_tate_structures() {
        assert_eq!(tate(0).tate_twist(2), tate(2));
        let h = tate(1).tate_twist(0);
        assert_eq!(h, tate(1));
    }

    #[test]
    fn dual_of_tate_is_opposite_twist() {
        let d = tate(2).dual();
        let b = deligne_bigrading(&d).unwrap();
        assert!(b.component(2, 2).is_some());
        assert_eq!(d.weight().jumps(), vec![4]);
    }

    #[test]
    fn self_conjugate_hodge_line_fails_validation() {
        // weight 0, dim 2, F^1 a real line: F^1 meets conj(F^1)
        let w = WeightFiltration::pure(2, 0);
        let f = HodgeFiltration::new(
            2,
            [(0, CSubspace::<f64>::full(2)), (1, CSubspace::span(&[vec![cxf(1.0, 0.0), cxf(0.0, 0.0)]], 2, TOL))],
        )
        .unwrap();
        let h = MixedHodgeStructure::new(w, f, TOL).unwrap();
        let r = h.validate();
        assert!(!r.ok);
        assert!(deligne_bigrading(&h).is_err());
    }

    #[test]
    fn non_nested_weight_is_reported() {
        let w = WeightFiltration::new(
            2,
            [(-2, QSubspace::coordinate(2, &[0])), (0, QSubspace::coordinate(2, &[1])), (2, QSubspace::full(2))],
        )
        .unwrap();
        let h = MixedHodgeStructure::new(w, HodgeFiltration::<f64>::new(2, [(0, CSubspace::full(2))]).unwrap(), TOL).unwrap();
        let r = h.validate();
        assert_eq!(r.failures[0].axiom, Axiom::WeightNested);
    }

    #[test]
    fn elliptic_curve_style_weight_one_structure() {
        // F^1 spanned by (1, tau) with Im tau > 0
        let w = WeightFiltration::pure(2, 1);
        let f = HodgeFiltration::new(
            2,
            [(0, CSubspace::<f64>::full(2)), (1, CSubspace::span(&[vec![cxf(1.0, 0.0), cxf(0.3, 1.2)]], 2, TOL))],
        )
        .unwrap();
        let h = MixedHodgeStructure::new(w, f, TOL).unwrap();
        let b = deligne_bigrading(&h).unwrap();
        assert_eq!(b.component(1, 0).unwrap().dim(), 1);
        assert_eq!(b.component(0, 1).unwrap().dim(), 1);
        assert!(b.component(0, 1).unwrap().same_as(&b.component(1, 0).unwrap().conj(), TOL));
    }

    /// Example 6iii-style orbit fiber: the bigrading types at z = i.
    #[test]
    fn orbit_fiber_types() {
        // basis e0, e, f, e6 with weights 0, -3, -3, -6
        let w = WeightFiltration::from_coordinate_weights(&[0, -3, -3, -6]);
        let n = QMat::from_ints(&[vec![0, 0, 0, 0], vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0]]);
        let z = cxf::<f64>(0.0, 1.0);
        let ez = n.to_complex::<f64>().scale(&z).exp_nilpotent();
        let f0 = HodgeFiltration::from_frame(&CMat::identity(4), &[0, -1, -2, -3], TOL);
        let h = MixedHodgeStructure::new(w, f0.transform(&ez, TOL), TOL).unwrap();
        let b = deligne_bigrading(&h).unwrap();
        let keys: Vec<_> = b.components().keys().copied().collect();
        assert_eq!(keys, vec![(-3, -3), (-2, -1), (-1, -2), (0, 0)]);
        let nu0 = ez.column(0);
        assert!(b.component(0, 0).unwrap().contains_vector(&nu0, TOL));
        assert!(b.component(-3, -3).unwrap().contains_vector(&[cxf(0.0, 0.0), cxf(0.0, 0.0), cxf(0.0, 0.0), cxf(1.0, 0.0)], TOL));
        let _ = q(0);
        let _ = two_pi_i::<f64>();
    }
}
