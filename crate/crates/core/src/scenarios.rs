//! Worked examples as turnkey computations: the dilogarithm variation, the
//! weight-6 nilpotent orbit with cubic height growth, heights of pairs of
//! triangles in the projective plane, the one-parameter triangle family and
//! the dimension-zero biextension.
//!
//! Every scenario reports a list of [`Check`]s comparing a closed formula
//! with the output of the general machinery.

use serde::Serialize;

use crate::biextension::{build_biextension, extract_invariants, BiextensionSpec, MiddleType};
use crate::dilog::{bloch_wigner, catalan, li2, zeta2};
use crate::error::{HodgeError, Result};
use crate::height::{height, height_biextension, Orientation, OrientedMhs};
use crate::limits::NilpotentOrbit;
use crate::linalg::{CMat, QMat};
use crate::mhs::{HodgeFiltration, MixedHodgeStructure, WeightFiltration};
use crate::real::{cabs, cln, creal, cx, cxf, two_pi_i, Cx, Real};
use crate::variations::{GammaTerm, LocalVariation};

/// One expected-versus-computed comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub computed: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, expected: f64, computed: f64, tolerance: f64) -> Self {
        Self { name: name.into(), expected, computed, tolerance }
    }

    pub fn error(&self) -> f64 {
        (self.computed - self.expected).abs()
    }

    /// Absolute below 1, relative above.
    pub fn pass(&self) -> bool {
        self.error() <= self.tolerance * self.expected.abs().max(1.0)
    }
}

fn degenerate(msg: impl Into<String>) -> HodgeError {
    HodgeError::Degenerate(msg.into())
}

// ---------------------------------------------------------------- dilog

/// Fiber of the dilogarithm variation at `s` in its integral basis
/// `v0, v1, v2`, oriented by `v0` and `(2πi)^{-2} v2`.
pub fn dilog_fiber<R: Real>(s: Cx<R>, tol: f64) -> Result<OrientedMhs<R>> {
    let one = creal(R::one());
    let zero = creal(R::zero());
    if s == zero || s == one {
        return Err(degenerate("s must avoid 0 and 1"));
    }
    let t1 = one / two_pi_i::<R>();
    let t2 = t1 * t1;
    let (l1, ls) = (cln(one - s), cln(s));
    let li = li2(s).value;
    let e0 = vec![one, t1 * l1, -t2 * (l1 * ls + li)];
    let e1 = vec![zero, t1, -t2 * ls];
    let e2 = vec![zero, zero, t2];
    let frame = CMat::from_columns(&[e0, e1, e2], 3);
    let w = WeightFiltration::from_coordinate_weights(&[0, -2, -4]);
    let f = HodgeFiltration::from_frame(&frame, &[0, -1, -2], tol);
    let h = MixedHodgeStructure::new(w, f, tol)?;
    let pi = R::pi();
    let bottom = vec![R::zero(), R::zero(), -R::one() / (R::from_f64(4.0) * pi * pi)];
    OrientedMhs::new(h, Orientation::new(vec![R::one(), R::zero(), R::zero()], bottom))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DilogScenario<R: Real> {
    pub height: R,
    pub height_biextension: R,
    pub expected: R,
    pub bigrading_ok: bool,
}

impl<R: Real> DilogScenario<R> {
    pub fn checks(&self, tol: f64) -> Vec<Check> {
        vec![
            Check::new("height (delta)", self.expected.to_f64(), self.height.to_f64(), tol),
            Check::new("height (biextension)", self.expected.to_f64(), self.height_biextension.to_f64(), tol),
            Check::new("bigrading ok", 1.0, if self.bigrading_ok { 1.0 } else { 0.0 }, 0.0),
        ]
    }
}

/// Height of the dilogarithm fiber, which equals `-D2(s)`.
pub fn scenario_dilog<R: Real>(s: Cx<R>, tol: f64) -> Result<DilogScenario<R>> {
    let h = dilog_fiber(s, tol)?;
    let bigrading_ok = h.mhs.validate().ok;
    Ok(DilogScenario {
        height: height(&h)?,
        height_biextension: height_biextension(&h)?,
        expected: -bloch_wigner(s),
        bigrading_ok,
    })
}

/// `-D2(i)`, the dilogarithm fiber height at `s = i`.
pub fn dilog_at_i<R: Real>() -> R {
    -catalan::<R>()
}

/// The dilogarithm variation near `s = 0` as `e^{zN} e^{Γ(s)} F_∞` with
/// `N v1 = -v2` and `Γ(s) v0 = (2πi)^{-1} log(1-s) v1 - (2πi)^{-2} Li2(s) v2`,
/// the power series truncated after `terms` monomials.
pub fn dilog_variation<R: Real>(terms: u32, tol: f64) -> Result<LocalVariation<R>> {
    let one = creal(R::one());
    let t1 = one / two_pi_i::<R>();
    let t2 = t1 * t1;
    let w = WeightFiltration::from_coordinate_weights(&[0, -2, -4]);
    let frame = CMat::diagonal(&[one, t1, t2]);
    let f_inf = HodgeFiltration::from_frame(&frame, &[0, -1, -2], tol);
    let n = QMat::from_ints(&[vec![0, 0, 0], vec![0, 0, 0], vec![0, -1, 0]]);
    let gamma = (1..=terms.max(1))
        .map(|k| {
            let kr = R::from_i64(k as i64);
            let mut m = CMat::zeros(3, 3);
            m[(1, 0)] = -t1 / creal(kr);
            m[(2, 0)] = -t2 / creal(kr * kr);
            GammaTerm { exponents: vec![k], matrix: m }
        })
        .collect();
    let pi = R::pi();
    let bottom = vec![R::zero(), R::zero(), -R::one() / (R::from_f64(4.0) * pi * pi)];
    LocalVariation::new(w, f_inf, vec![n], gamma, Orientation::new(vec![R::one(), R::zero(), R::zero()], bottom), tol)
}

// ---------------------------------------------------------------- orbit

/// Nilpotent orbit with `W` of weights `0, -3, -3, -6`, `N` the shift
/// `e_k -> e_{k+1}` and `F_∞` the coordinate flag.
pub fn orbit6iii<R: Real>(tol: f64) -> Result<(NilpotentOrbit<R>, Orientation<R>)> {
    let w = WeightFiltration::from_coordinate_weights(&[0, -3, -3, -6]);
    let n = QMat::from_ints(&[vec![0, 0, 0, 0], vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0]]);
    let f = HodgeFiltration::from_frame(&CMat::identity(4), &[0, -1, -2, -3], tol);
    Ok((NilpotentOrbit::new(w, n, f, tol)?, Orientation::coordinate(4, 0, 3)))
}

/// The orbit as a one-variable variation with `Γ = 0`.
pub fn orbit6iii_variation<R: Real>(tol: f64) -> Result<LocalVariation<R>> {
    let (o, orientation) = orbit6iii::<R>(tol)?;
    LocalVariation::new(o.w, o.f_inf, vec![o.n], Vec::new(), orientation, tol)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitScenario<R: Real> {
    pub fiber_height: R,
    /// `(log|s|)^3 / (12 π^3)` with `s = e^{2πiz}`.
    pub expected: R,
    pub limit_height: R,
}

impl<R: Real> OrbitScenario<R> {
    pub fn checks(&self, tol: f64) -> Vec<Check> {
        vec![
            Check::new("fiber height", self.expected.to_f64(), self.fiber_height.to_f64(), tol),
            Check::new("limit height", 0.0, self.limit_height.to_f64(), tol),
        ]
    }
}

pub fn scenario_orbit6iii<R: Real>(z: Cx<R>, tol: f64) -> Result<OrbitScenario<R>> {
    if z.im <= R::zero() {
        return Err(degenerate("Im z must be positive"));
    }
    let (orbit, orientation) = orbit6iii::<R>(tol)?;
    let fiber = OrientedMhs::new(orbit.fiber(z)?, orientation.clone())?;
    let pi = R::pi();
    let log_s = -(pi + pi) * z.im;
    Ok(OrbitScenario {
        fiber_height: height(&fiber)?,
        expected: log_s * log_s * log_s / (R::from_f64(12.0) * pi * pi * pi),
        limit_height: orbit.limit_height(&orientation)?,
    })
}

// ---------------------------------------------------------------- triangles

/// Two triangles in the projective plane: the lines `a·x = 0`, `b·x = 0`,
/// `c·x = 0` carrying the cycle with parameter `alpha`, and the coordinate
/// triangle carrying the cycle with parameter `beta`.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangleData<R: Real> {
    pub a: [Cx<R>; 3],
    pub b: [Cx<R>; 3],
    pub c: [Cx<R>; 3],
    pub alpha: Cx<R>,
    pub beta: Cx<R>,
}

impl<R: Real> TriangleData<R> {
    pub fn new(a: [Cx<R>; 3], b: [Cx<R>; 3], c: [Cx<R>; 3]) -> Self {
        let one = creal(R::one());
        Self { a, b, c, alpha: one, beta: one }
    }

    /// The family `a = (1,t,1)`, `b = (1,1,t)`, `c = (t,1,1)`.
    pub fn family(t: Cx<R>) -> Self {
        let one = creal(R::one());
        Self::new([one, t, one], [one, one, t], [t, one, one])
    }

    pub fn conj(&self) -> Self {
        let c3 = |v: &[Cx<R>; 3]| v.map(|z| z.conj());
        Self { a: c3(&self.a), b: c3(&self.b), c: c3(&self.c), alpha: self.alpha.conj(), beta: self.beta.conj() }
    }

    fn lines(&self) -> [[Cx<R>; 3]; 3] {
        [self.a, self.b, self.c]
    }

    /// General position: nonzero coefficients, nonzero 2×2 minors and
    /// nonzero cycle parameters.
    pub fn check(&self) -> Result<()> {
        let zero = creal(R::zero());
        let small = |z: Cx<R>| cabs(z).to_f64() < 1e-300;
        if self.alpha == zero || self.beta == zero {
            return Err(degenerate("cycle parameters must be nonzero"));
        }
        let lines = self.lines();
        if lines.iter().flatten().any(|&z| small(z)) {
            return Err(degenerate("triangle passes through a coordinate vertex"));
        }
        for l in 0..3 {
            let (x, y) = (lines[l], lines[(l + 1) % 3]);
            for i in 0..3 {
                let (i1, i2) = ((i + 1) % 3, (i + 2) % 3);
                if small(x[i1] * y[i2] - x[i2] * y[i1]) {
                    return Err(degenerate("two lines meet on a coordinate line"));
                }
            }
        }
        Ok(())
    }
}

fn pair_prefactor<R: Real>() -> R {
    // 1 / (2πi)^2
    let pi = R::pi();
    -R::one() / (R::from_f64(4.0) * pi * pi)
}

/// `(2πi)^{-2} Σ D2(x_{i+2} y_{i+1} / (x_{i+1} y_{i+2}))` over cyclic shifts
/// of the indices and of the letters `(a, b, c)`: nine terms.
pub fn triangle_height_nine<R: Real>(t: &TriangleData<R>) -> Result<R> {
    t.check()?;
    let lines = t.lines();
    let mut sum = R::zero();
    for k in 0..3 {
        let (i1, i2) = ((1 + k) % 3, (2 + k) % 3);
        for l in 0..3 {
            let (x, y) = (lines[l], lines[(l + 1) % 3]);
            sum += bloch_wigner(x[i2] * y[i1] / (x[i1] * y[i2]));
        }
    }
    Ok(pair_prefactor::<R>() * sum)
}

/// The same height reduced to six terms with the five-term relation.
pub fn triangle_height_six<R: Real>(t: &TriangleData<R>) -> Result<R> {
    t.check()?;
    let (a, b, c) = (t.a, t.b, t.c);
    let mut sum = R::zero();
    for k in 0..3 {
        let (i1, i2) = ((1 + k) % 3, (2 + k) % 3);
        let num = a[i2] * b[i1] - a[i1] * b[i2];
        let d1 = b[i1] * c[i2] - b[i2] * c[i1];
        let d2 = a[i2] * c[i1] - a[i1] * c[i2];
        sum += bloch_wigner(num / d1 * (c[i2] / a[i2]));
        sum += bloch_wigner(num / d2 * (c[i1] / b[i1]));
    }
    Ok(pair_prefactor::<R>() * sum)
}

fn cross<R: Real>(u: &[Cx<R>; 3], v: &[Cx<R>; 3]) -> [Cx<R>; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

fn unit<R: Real>(j: usize) -> [Cx<R>; 3] {
    let mut e = [creal(R::zero()); 3];
    e[j] = creal(R::one());
    e
}

/// `p_{ij}`: the intersection of line `i` of the first triangle with the
/// coordinate line `x_j = 0`.
pub fn intersection_point<R: Real>(t: &TriangleData<R>, i: usize, j: usize) -> [Cx<R>; 3] {
    cross(&t.lines()[i], &unit(j))
}

fn log_abs_over_2pi<R: Real>(z: Cx<R>) -> R {
    let pi = R::pi();
    cabs(z).ln() / (pi + pi)
}

/// `δ_C[i][j] = (1/2π) log|β_j f'_j(p_{ij})|` with `f'_j = x_{j+1}/x_{j+2}`,
/// `β_0 = β` and `β_1 = β_2 = 1`.
pub fn triangle_delta_c<R: Real>(t: &TriangleData<R>) -> Result<[[R; 3]; 3]> {
    t.check()?;
    let one = creal(R::one());
    let mut out = [[R::zero(); 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let p = intersection_point(t, i, j);
            let beta = if j == 0 { t.beta } else { one };
            *slot = log_abs_over_2pi(beta * p[(j + 1) % 3] / p[(j + 2) % 3]);
        }
    }
    Ok(out)
}

/// Mirror of `δ_C` on the dual side: `(1/2π) log|α_i f_i(p_{ij})|` with
/// `f_i = s_{i+1}/s_{i+2}` for the sections `s = (a, b, c)`.
fn triangle_dual_slots<R: Real>(t: &TriangleData<R>) -> [[R; 3]; 3] {
    let one = creal(R::one());
    let lines = t.lines();
    let eval = |l: &[Cx<R>; 3], p: &[Cx<R>; 3]| l[0] * p[0] + l[1] * p[1] + l[2] * p[2];
    let mut out = [[R::zero(); 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let p = intersection_point(t, i, j);
            let alpha = if i == 0 { t.alpha } else { one };
            *slot = log_abs_over_2pi(alpha * eval(&lines[(i + 1) % 3], &p) / eval(&lines[(i + 2) % 3], &p));
        }
    }
    out
}

/// Biextension with graded pieces `Q(0)`, `Q(1) ⊕ Q(1)^9`, `Q(2)`: the first
/// middle slot is the class of a line, the other nine the intersection
/// points in row-major `(i, j)` order. The dual-side block mirrors the
/// cycle side.
pub fn triangle_spec<R: Real>(t: &TriangleData<R>) -> Result<BiextensionSpec<R>> {
    let dc = triangle_delta_c(t)?;
    let dual = triangle_dual_slots(t);
    let mut delta1 = vec![log_abs_over_2pi(t.alpha)];
    delta1.extend(dc.iter().flatten().copied());
    let mut delta2 = vec![log_abs_over_2pi(t.beta)];
    delta2.extend(dual.iter().flatten().copied());
    Ok(BiextensionSpec {
        weights: (0, -2, -4),
        middle: vec![MiddleType { p: -1, q: -1, multiplicity: 10 }],
        delta1,
        delta2,
        ht: triangle_height_nine(t)?,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TriangleScenario<R: Real> {
    pub ht_nine: R,
    pub ht_six: R,
    pub delta_c: [[R; 3]; 3],
    /// Height of the biextension built from the extracted invariants.
    pub ht_machinery: R,
    pub roundtrip_error: f64,
}

impl<R: Real> TriangleScenario<R> {
    pub fn checks(&self, tol: f64) -> Vec<Check> {
        vec![
            Check::new("six-term vs nine-term", self.ht_nine.to_f64(), self.ht_six.to_f64(), tol),
            Check::new("height (delta machinery)", self.ht_nine.to_f64(), self.ht_machinery.to_f64(), tol),
            Check::new("spec round trip", 0.0, self.roundtrip_error, tol),
        ]
    }
}

pub fn scenario_triangle<R: Real>(t: &TriangleData<R>, tol: f64) -> Result<TriangleScenario<R>> {
    let spec = triangle_spec(t)?;
    let b = build_biextension(&spec, tol)?;
    let back = extract_invariants(&b)?;
    Ok(TriangleScenario {
        ht_nine: spec.ht,
        ht_six: triangle_height_six(t)?,
        delta_c: triangle_delta_c(t)?,
        ht_machinery: height(&b)?,
        roundtrip_error: back.max_difference(&spec),
    })
}

// ---------------------------------------------------------------- family

/// Boundary points of the triangle family, `None` standing for infinity.
pub const FAMILY_BOUNDARY: [Option<f64>; 5] = [Some(-2.0), Some(-1.0), Some(0.0), Some(1.0), None];

/// `D2(-t) / (4 ζ(2))`.
pub fn family_closed_form<R: Real>(t: Cx<R>) -> R {
    bloch_wigner(-t) / (R::from_f64(4.0) * zeta2::<R>())
}

/// `(3/(2πi)^2) (2 D2(t) + D2(t^{-2}))`.
pub fn family_three_term<R: Real>(t: Cx<R>) -> R {
    let two = R::from_f64(2.0);
    let inv2 = creal(R::one()) / (t * t);
    R::from_f64(3.0) * pair_prefactor::<R>() * (two * bloch_wigner(t) + bloch_wigner(inv2))
}

/// Heights along one approach to a boundary point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Approach {
    /// Boundary point, `None` for infinity.
    pub point: Option<f64>,
    /// `(distance parameter, height)`; the parameter is `ε` for finite
    /// points and `R` for `t = iR`.
    pub samples: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyScenario<R: Real> {
    pub height: R,
    pub closed_form: R,
    pub three_term: R,
    pub limit_values: Vec<Approach>,
}

impl<R: Real> FamilyScenario<R> {
    pub fn checks(&self, tol: f64) -> Vec<Check> {
        let mut out = vec![
            Check::new("nine-term vs D2(-t)/(4 zeta(2))", self.closed_form.to_f64(), self.height.to_f64(), tol),
            Check::new("three-term vs D2(-t)/(4 zeta(2))", self.closed_form.to_f64(), self.three_term.to_f64(), tol),
        ];
        for a in &self.limit_values {
            let last = a.samples.last().map_or(0.0, |s| s.1);
            let name = match a.point {
                Some(p) => format!("limit at t = {p}"),
                None => "limit at t = infinity".to_string(),
            };
            out.push(Check::new(name, 0.0, last, 1e-4));
        }
        out
    }
}

/// Approach to each boundary point: `t = p + ε e^{i}` for `ε = 10^{-2..-6}`,
/// and `t = iR` for `R = 10^{2..6}` at infinity.
pub fn family_limits<R: Real>() -> Result<Vec<Approach>> {
    FAMILY_BOUNDARY
        .iter()
        .map(|&point| {
            let samples = (2..=6)
                .map(|k| {
                    let (param, t) = match point {
                        Some(p) => {
                            let eps = 10f64.powi(-k);
                            (eps, cxf::<R>(p + eps * 1f64.cos(), eps * 1f64.sin()))
                        }
                        None => {
                            let r = 10f64.powi(k);
                            (r, cxf::<R>(0.0, r))
                        }
                    };
                    Ok((param, triangle_height_nine(&TriangleData::family(t))?.to_f64()))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Approach { point, samples })
        })
        .collect()
}

pub fn scenario_family<R: Real>(t: Cx<R>) -> Result<FamilyScenario<R>> {
    let excluded = FAMILY_BOUNDARY.iter().flatten().any(|&p| t == cxf(p, 0.0));
    if excluded || !t.re.to_f64().is_finite() || !t.im.to_f64().is_finite() {
        return Err(degenerate("t must avoid -2, -1, 0, 1 and infinity"));
    }
    Ok(FamilyScenario {
        height: triangle_height_nine(&TriangleData::family(t))?,
        closed_form: family_closed_form(t),
        three_term: family_three_term(t),
        limit_values: family_limits::<R>()?,
    })
}

// ---------------------------------------------------------------- dim 0

/// Biextension of two dimension-zero cycles with parameters `a` and `b`:
/// middle `Q(1)^2`, `δ₁ = (log|a|, log|b|)/2π`, mirrored `δ₂`, height 0.
pub fn dim0_spec<R: Real>(a: Cx<R>, b: Cx<R>) -> Result<BiextensionSpec<R>> {
    let (zero, one) = (creal(R::zero()), creal(R::one()));
    if [a, b].iter().any(|&z| z == zero || z == one) {
        return Err(degenerate("a and b must avoid 0 and 1"));
    }
    let (la, lb) = (log_abs_over_2pi(a), log_abs_over_2pi(b));
    Ok(BiextensionSpec {
        weights: (0, -2, -4),
        middle: vec![MiddleType { p: -1, q: -1, multiplicity: 2 }],
        delta1: vec![la, lb],
        delta2: vec![lb, la],
        ht: R::zero(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dim0Scenario<R: Real> {
    pub spec: BiextensionSpec<R>,
    pub roundtrip_error: f64,
    pub height: R,
}

impl<R: Real> Dim0Scenario<R> {
    pub fn roundtrip_ok(&self, tol: f64) -> bool {
        self.roundtrip_error <= tol
    }

    pub fn checks(&self, tol: f64) -> Vec<Check> {
        vec![Check::new("height", 0.0, self.height.to_f64(), tol), Check::new("spec round trip", 0.0, self.roundtrip_error, tol)]
    }
}

pub fn scenario_dim0<R: Real>(a: Cx<R>, b: Cx<R>, tol: f64) -> Result<Dim0Scenario<R>> {
    let spec = dim0_spec(a, b)?;
    let h = build_biextension(&spec, tol)?;
    let back = extract_invariants(&h)?;
    Ok(Dim0Scenario { roundtrip_error: back.max_difference(&spec), height: height(&h)?, spec })
}

/// `e^{iθ}` helper for sampling points on circles.
pub fn polar<R: Real>(r: R, theta: R) -> Cx<R> {
    cx(r * theta.cos(), r * theta.sin())
}
