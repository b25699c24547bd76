//! JSON documents for structures, orbits and variations.
//!
//! Rational entries are strings `"p/q"` (integers and decimal numbers are
//! accepted too); complex entries are `[re, im]` pairs whose parts are
//! numbers or rational strings. Output is emitted with sorted keys.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{HodgeError, Result};
use crate::height::{Orientation, OrientedMhs};
use crate::limits::NilpotentOrbit;
use crate::linalg::{CMat, CSubspace, QMat, QSubspace};
use crate::mhs::{HodgeFiltration, MixedHodgeStructure, WeightFiltration};
use crate::real::{cx, Cx, Real};
use crate::variations::{GammaTerm, LocalVariation};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Text(String),
}

impl Scalar {
    pub fn rational(q: &BigRational) -> Self {
        Scalar::Text(q.to_string())
    }

    pub fn to_rational(&self) -> Result<BigRational> {
        match self {
            Scalar::Number(x) => {
                BigRational::from_float(*x).ok_or_else(|| HodgeError::Parse(format!("non-finite number {x}")))
            }
            Scalar::Text(s) => parse_rational(s),
        }
    }

    pub fn to_real<R: Real>(&self) -> Result<R> {
        match self {
            Scalar::Number(x) => Ok(R::from_f64(*x)),
            Scalar::Text(s) => Ok(R::from_rational(&parse_rational(s)?)),
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if let Ok(q) = BigRational::from_str(t) {
        return Ok(q);
    }
    // decimal notation, read exactly
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| HodgeError::Parse(format!("bad number {s:?}")))?),
        None => (t, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int}{frac}");
    let n = BigInt::from_str(&digits).map_err(|_| HodgeError::Parse(format!("bad number {s:?}")))?;
    let scale = exp - frac.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut q = BigRational::from_integer(n);
    for _ in 0..scale.unsigned_abs() {
        q = if scale > 0 { q * &ten } else { q / &ten };
    }
    Ok(q)
}

pub type ComplexEntry = [Scalar; 2];

/// Numbers at 53 bits; decimal strings above, so nothing is lost.
fn real_entry<R: Real>(x: R) -> Scalar {
    if R::BITS > 53 {
        Scalar::Text(x.to_string())
    } else {
        Scalar::Number(x.to_f64())
    }
}

fn complex_entry<R: Real>(z: &Cx<R>) -> ComplexEntry {
    [real_entry(z.re), real_entry(z.im)]
}

fn parse_complex<R: Real>(e: &ComplexEntry) -> Result<Cx<R>> {
    Ok(cx(e[0].to_real()?, e[1].to_real()?))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightStep {
    pub weight: i32,
    pub basis: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HodgeStep {
    pub level: i32,
    pub basis: Vec<Vec<ComplexEntry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrientationDoc {
    pub top: Vec<Scalar>,
    pub bottom: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaDoc {
    pub exponents: Vec<u32>,
    pub matrix: Vec<Vec<ComplexEntry>>,
}

/// A structure (`hodge_filtration`), an orbit (`nilpotent`, `f_infinity`)
/// or a variation (`nilpotents`, `f_infinity`, `gamma`).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub dimension: usize,
    pub weight_filtration: Vec<WeightStep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hodge_filtration: Option<Vec<HodgeStep>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<OrientationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nilpotent: Option<Vec<Vec<Scalar>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_infinity: Option<Vec<HodgeStep>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nilpotents: Option<Vec<Vec<Vec<Scalar>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<GammaDoc>>,
}

/// Serializes with keys in sorted order.
pub fn to_sorted_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| HodgeError::Parse(e.to_string()))?;
    serde_json::to_string_pretty(&v).map_err(|e| HodgeError::Parse(e.to_string()))
}

fn weight_doc(w: &WeightFiltration) -> Vec<WeightStep> {
    w.steps()
        .iter()
        .map(|(&weight, s)| WeightStep {
            weight,
            basis: s.basis_vectors().iter().map(|v| v.iter().map(Scalar::rational).collect()).collect(),
        })
        .collect()
}

fn hodge_doc<R: Real>(f: &HodgeFiltration<R>) -> Vec<HodgeStep> {
    f.steps()
        .iter()
        .map(|(&level, s)| HodgeStep {
            level,
            basis: s.basis_vectors().iter().map(|v| v.iter().map(complex_entry).collect()).collect(),
        })
        .collect()
}

fn rational_matrix_doc(m: &QMat) -> Vec<Vec<Scalar>> {
    m.rows_vec().iter().map(|r| r.iter().map(Scalar::rational).collect()).collect()
}

fn complex_matrix_doc<R: Real>(m: &CMat<R>) -> Vec<Vec<ComplexEntry>> {
    m.rows_vec().iter().map(|r| r.iter().map(complex_entry).collect()).collect()
}

fn orientation_doc<R: Real>(o: &Orientation<R>) -> OrientationDoc {
    let f = |v: &[R]| v.iter().map(|&x| real_entry(x)).collect();
    OrientationDoc { top: f(&o.top), bottom: f(&o.bottom) }
}

impl Document {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| HodgeError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        to_sorted_json(self)
    }

    pub fn from_mhs<R: Real>(h: &MixedHodgeStructure<R>) -> Self {
        Self {
            dimension: h.dim(),
            weight_filtration: weight_doc(h.weight()),
            hodge_filtration: Some(hodge_doc(h.hodge())),
            ..Self::default()
        }
    }

    pub fn from_oriented<R: Real>(h: &OrientedMhs<R>) -> Self {
        Self { orientation: Some(orientation_doc(&h.orientation)), ..Self::from_mhs(&h.mhs) }
    }

    pub fn from_orbit<R: Real>(o: &NilpotentOrbit<R>, orientation: Option<&Orientation<R>>) -> Self {
        Self {
            dimension: o.dim(),
            weight_filtration: weight_doc(&o.w),
            orientation: orientation.map(orientation_doc),
            nilpotent: Some(rational_matrix_doc(&o.n)),
            f_infinity: Some(hodge_doc(&o.f_inf)),
            ..Self::default()
        }
    }

    pub fn from_variation<R: Real>(v: &LocalVariation<R>) -> Self {
        Self {
            dimension: v.dim(),
            weight_filtration: weight_doc(&v.w),
            orientation: Some(orientation_doc(&v.orientation)),
            f_infinity: Some(hodge_doc(&v.f_inf)),
            nilpotents: Some(v.nilpotents.iter().map(rational_matrix_doc).collect()),
            gamma: Some(
                v.gamma.iter().map(|t| GammaDoc { exponents: t.exponents.clone(), matrix: complex_matrix_doc(&t.matrix) }).collect(),
            ),
            ..Self::default()
        }
    }

    fn check_len(&self, what: &str, found: usize) -> Result<()> {
        if found != self.dimension {
            return Err(HodgeError::Parse(format!("{what}: expected {} entries, found {found}", self.dimension)));
        }
        Ok(())
    }

    /// Builds `W` as given; nestedness is left to validation.
    pub fn weight(&self) -> Result<WeightFiltration> {
        let mut steps = Vec::with_capacity(self.weight_filtration.len());
        for s in &self.weight_filtration {
            let mut rows = Vec::with_capacity(s.basis.len());
            for v in &s.basis {
                self.check_len(&format!("weight {} basis vector", s.weight), v.len())?;
                rows.push(v.iter().map(Scalar::to_rational).collect::<Result<Vec<_>>>()?);
            }
            steps.push((s.weight, QSubspace::span(&rows, self.dimension, 0.0)));
        }
        WeightFiltration::new(self.dimension, steps)
    }

    fn filtration<R: Real>(&self, steps: &[HodgeStep], tol: f64) -> Result<HodgeFiltration<R>> {
        let mut out = Vec::with_capacity(steps.len());
        for s in steps {
            let mut rows = Vec::with_capacity(s.basis.len());
            for v in &s.basis {
                self.check_len(&format!("level {} basis vector", s.level), v.len())?;
                rows.push(v.iter().map(parse_complex).collect::<Result<Vec<Cx<R>>>>()?);
            }
            out.push((s.level, CSubspace::span(&rows, self.dimension, tol)));
        }
        HodgeFiltration::new(self.dimension, out)
    }

    fn rational_matrix(&self, m: &[Vec<Scalar>]) -> Result<QMat> {
        self.check_len("matrix rows", m.len())?;
        let mut rows = Vec::with_capacity(m.len());
        for r in m {
            self.check_len("matrix row", r.len())?;
            rows.push(r.iter().map(Scalar::to_rational).collect::<Result<Vec<_>>>()?);
        }
        Ok(QMat::from_rows(&rows, self.dimension))
    }

    fn complex_matrix<R: Real>(&self, m: &[Vec<ComplexEntry>]) -> Result<CMat<R>> {
        self.check_len("matrix rows", m.len())?;
        let mut rows = Vec::with_capacity(m.len());
        for r in m {
            self.check_len("matrix row", r.len())?;
            rows.push(r.iter().map(parse_complex).collect::<Result<Vec<Cx<R>>>>()?);
        }
        Ok(CMat::from_rows(&rows, self.dimension))
    }

    pub fn orientation<R: Real>(&self) -> Result<Option<Orientation<R>>> {
        let Some(o) = &self.orientation else { return Ok(None) };
        self.check_len("orientation top", o.top.len())?;
        self.check_len("orientation bottom", o.bottom.len())?;
        let f = |v: &[Scalar]| v.iter().map(Scalar::to_real).collect::<Result<Vec<R>>>();
        Ok(Some(Orientation::new(f(&o.top)?, f(&o.bottom)?)))
    }

    fn require_orientation<R: Real>(&self) -> Result<Orientation<R>> {
        self.orientation()?.ok_or_else(|| HodgeError::Parse("missing orientation".into()))
    }

    /// The structure `(F, W)`; for orbit and variation documents `F_∞` is used.
    pub fn mhs<R: Real>(&self, tol: f64) -> Result<MixedHodgeStructure<R>> {
        let steps = self
            .hodge_filtration
            .as_ref()
            .or(self.f_infinity.as_ref())
            .ok_or_else(|| HodgeError::Parse("missing hodge_filtration".into()))?;
        MixedHodgeStructure::new(self.weight()?, self.filtration(steps, tol)?, tol)
    }

    pub fn oriented<R: Real>(&self, tol: f64) -> Result<OrientedMhs<R>> {
        OrientedMhs::new(self.mhs(tol)?, self.require_orientation()?)
    }

    pub fn orbit<R: Real>(&self, tol: f64) -> Result<NilpotentOrbit<R>> {
        let n = match (&self.nilpotent, &self.nilpotents) {
            (Some(n), _) => self.rational_matrix(n)?,
            (None, Some(ns)) if ns.len() == 1 => self.rational_matrix(&ns[0])?,
            _ => return Err(HodgeError::Parse("missing nilpotent".into())),
        };
        let f = self.f_infinity.as_ref().ok_or_else(|| HodgeError::Parse("missing f_infinity".into()))?;
        NilpotentOrbit::new(self.weight()?, n, self.filtration(f, tol)?, tol)
    }

    pub fn variation<R: Real>(&self, tol: f64) -> Result<LocalVariation<R>> {
        let nilpotents = match (&self.nilpotents, &self.nilpotent) {
            (Some(ns), _) => ns.iter().map(|m| self.rational_matrix(m)).collect::<Result<Vec<_>>>()?,
            (None, Some(n)) => vec![self.rational_matrix(n)?],
            _ => return Err(HodgeError::Parse("missing nilpotents".into())),
        };
        let f = self.f_infinity.as_ref().ok_or_else(|| HodgeError::Parse("missing f_infinity".into()))?;
        let gamma = self
            .gamma
            .iter()
            .flatten()
            .map(|g| Ok(GammaTerm { exponents: g.exponents.clone(), matrix: self.complex_matrix(&g.matrix)? }))
            .collect::<Result<Vec<_>>>()?;
        LocalVariation::new(self.weight()?, self.filtration(f, tol)?, nilpotents, gamma, self.require_orientation()?, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mhs::Axiom;
    use crate::random::random_hodge_tate;
    use crate::scenarios::{dilog_fiber, orbit6iii};
    use num_complex::Complex64;

    const TOL: f64 = 1e-9;

    #[test]
    fn rationals_parse_exactly() {
        assert_eq!(parse_rational("3/4").unwrap(), BigRational::new(3.into(), 4.into()));
        assert_eq!(parse_rational("-0.25").unwrap(), BigRational::new((-1).into(), 4.into()));
        assert_eq!(parse_rational("15e-1").unwrap(), BigRational::new(3.into(), 2.into()));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn oriented_structure_round_trips() {
        let h = dilog_fiber::<f64>(Complex64::new(0.3, 0.6), TOL).unwrap();
        let doc = Document::from_oriented(&h);
        let text = doc.to_json().unwrap();
        let back = Document::parse(&text).unwrap().oriented::<f64>(TOL).unwrap();
        let (a, b) = (crate::height::height(&h).unwrap(), crate::height::height(&back).unwrap());
        assert!((a - b).abs() < 1e-12);
        assert_eq!(text, Document::parse(&text).unwrap().to_json().unwrap());
    }

    #[test]
    fn double_double_documents_keep_precision() {
        use crate::real::{cxf, DoubleDouble};
        let h = dilog_fiber::<DoubleDouble>(cxf(0.0, 1.0), TOL).unwrap();
        let text = Document::from_oriented(&h).to_json().unwrap();
        let back = Document::parse(&text).unwrap().oriented::<DoubleDouble>(TOL).unwrap();
        let diff = crate::height::height(&back).unwrap() + crate::dilog::catalan::<DoubleDouble>();
        assert!(diff.abs().to_f64() < 1e-28, "{diff}");
    }

    #[test]
    fn keys_are_sorted() {
        let (o, orient) = orbit6iii::<f64>(TOL).unwrap();
        let text = Document::from_orbit(&o, Some(&orient)).to_json().unwrap();
        let keys: Vec<usize> = ["dimension", "f_infinity", "nilpotent", "orientation", "weight_filtration"]
            .iter()
            .map(|k| text.find(&format!("\"{k}\"")).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        let back = Document::parse(&text).unwrap().orbit::<f64>(TOL).unwrap();
        assert_eq!(back.n, o.n);
    }

    #[test]
    fn variation_round_trips() {
        let v = random_hodge_tate::<f64>(&[1, 2, 1], 2, 4, TOL).unwrap();
        let back = Document::parse(&Document::from_variation(&v).to_json().unwrap()).unwrap().variation::<f64>(TOL).unwrap();
        assert_eq!(back.nilpotents, v.nilpotents);
        let z = [Complex64::new(0.1, 1.0); 2];
        let s = crate::variations::covering(&z);
        assert!((back.fiber_height(&z, &s).unwrap() - v.fiber_height(&z, &s).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn non_nested_weight_is_reported() {
        let text = r#"{"dimension": 2,
            "weight_filtration": [{"weight": -1, "basis": [["1", "0"]]}, {"weight": 0, "basis": [["0", "1"]]}],
            "hodge_filtration": [{"level": 0, "basis": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}]}"#;
        let h = Document::parse(text).unwrap().mhs::<f64>(TOL).unwrap();
        let r = h.validate();
        assert!(!r.ok && r.failures[0].axiom == Axiom::WeightNested);
    }

    #[test]
    fn wrong_lengths_are_parse_errors() {
        let text = r#"{"dimension": 2, "weight_filtration": [{"weight": 0, "basis": [["1"]]}]}"#;
        assert!(matches!(Document::parse(text).unwrap().weight(), Err(HodgeError::Parse(_))));
    }
}
