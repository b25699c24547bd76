use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Value};

use hodge_core::height::{height, height_biextension};
use hodge_core::linalg::CMat;
use hodge_core::mhs::{deligne_bigrading, MixedHodgeStructure};
use hodge_core::random::random_hodge_tate;
use hodge_core::real::{from_c64, Cx, Real};
use hodge_core::scenarios::{self, Check, TriangleData};
use hodge_core::schema::Document;
use hodge_core::splitting::deligne_delta;
use hodge_core::variations::{height_sweep, ray};
use hodge_core::HodgeError;

use crate::args::{Cli, Command, ExampleCommand, Quantity, ScenarioCommand};
use crate::error::{CliError, EXIT_INVALID, EXIT_NUMERICAL};
use crate::output::Output;
use crate::parse::parse_complex;

fn read_document(path: &Path) -> Result<Document, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    Ok(Document::parse(&text)?)
}

fn complex_arg<R: Real>(text: &str) -> Result<Cx<R>, CliError> {
    parse_complex(text).map(from_c64).map_err(CliError::invalid)
}

fn num<R: Real>(x: R) -> Value {
    json!(x.to_f64())
}

fn text<R: Real>(x: R) -> String {
    x.to_string()
}

fn complex_matrix<R: Real>(m: &CMat<R>) -> Value {
    json!(m.rows_vec().iter().map(|r| r.iter().map(|z| [z.re.to_f64(), z.im.to_f64()]).collect::<Vec<_>>()).collect::<Vec<_>>())
}

pub fn run<R: Real>(cli: &Cli) -> Result<Output, CliError> {
    let tol = cli.tol;
    match &cli.command {
        Command::Validate { path } => validate::<R>(&read_document(path)?, tol),
        Command::Compute { what, path } => compute::<R>(*what, &read_document(path)?, tol),
        Command::Scenario { which } => scenario::<R>(which, tol),
        Command::Sweep { path, x, y_min, y_max, count, log } => {
            sweep::<R>(&read_document(path)?, *x, *y_min, *y_max, *count, *log, tol)
        }
        Command::Example { which } => example::<R>(which, cli.seed, tol),
    }
}

fn validate<R: Real>(doc: &Document, tol: f64) -> Result<Output, CliError> {
    let h = doc.mhs::<R>(tol)?;
    let report = h.validate();
    let mut failures: Vec<(String, String)> =
        report.failures.iter().map(|f| (format!("{:?}", f.axiom), describe(&f.axiom.to_string(), &f.detail))).collect();
    if report.ok && doc.orientation.is_some() {
        if let Err(e) = doc.oriented::<R>(tol) {
            failures.push(("Orientation".into(), e.to_string()));
        }
    }
    let ok = failures.is_empty();
    for (axiom, detail) in &failures {
        eprintln!("FAIL {axiom} {detail}");
    }
    let json = json!({
        "ok": ok,
        "failures": failures.iter().map(|(a, d)| json!({"axiom": a, "detail": d})).collect::<Vec<_>>(),
    });
    let rows = failures.iter().map(|(a, d)| vec![a.clone(), d.clone()]).collect();
    Ok(Output::new(json, &["axiom", "detail"], rows).with_code(if ok { 0 } else { EXIT_INVALID }))
}

fn describe(what: &str, detail: &str) -> String {
    if detail.is_empty() {
        what.to_string()
    } else {
        format!("{what} ({detail})")
    }
}

fn compute<R: Real>(what: Quantity, doc: &Document, tol: f64) -> Result<Output, CliError> {
    match what {
        Quantity::Bigrading => {
            let h = doc.mhs::<R>(tol)?;
            let b = deligne_bigrading(&h)?;
            let comps: Vec<Value> = b
                .components()
                .iter()
                .map(|(&(p, q), s)| {
                    let basis: Vec<Vec<[f64; 2]>> =
                        s.basis_vectors().iter().map(|v| v.iter().map(|z| [z.re.to_f64(), z.im.to_f64()]).collect()).collect();
                    json!({"p": p, "q": q, "dimension": s.dim(), "basis": basis})
                })
                .collect();
            let rows = b.components().iter().map(|(&(p, q), s)| vec![p.to_string(), q.to_string(), s.dim().to_string()]).collect();
            let json = json!({"components": comps, "hodge_tate": b.is_hodge_tate(), "grading": complex_matrix(b.y())});
            Ok(Output::new(json, &["p", "q", "dimension"], rows))
        }
        Quantity::Delta => {
            let h = doc.mhs::<R>(tol)?;
            let s = deligne_delta(&h)?;
            let scale = s.delta.max_abs().max(1.0);
            let code = if s.residual > tol * scale { EXIT_NUMERICAL } else { 0 };
            let real: Vec<Vec<f64>> = s.delta.rows_vec().iter().map(|r| r.iter().map(|z| z.re.to_f64()).collect()).collect();
            let mut rows = Vec::new();
            for (i, r) in s.delta.rows_vec().iter().enumerate() {
                for (j, z) in r.iter().enumerate() {
                    rows.push(vec![i.to_string(), j.to_string(), text(z.re)]);
                }
            }
            let types: Vec<Value> = s.hodge_components.keys().map(|&(p, q)| json!([p, q])).collect();
            let json = json!({"delta": real, "residual": s.residual, "component_types": types});
            Ok(Output::new(json, &["row", "col", "value"], rows).with_code(code))
        }
        Quantity::Height => {
            let h = doc.oriented::<R>(tol)?;
            let ht = height(&h)?;
            let mut json = json!({"height": num(ht), "height_decimal": text(ht), "length": h.length()});
            let mut rows = vec![vec!["height".to_string(), text(ht)]];
            if let Ok(hb) = height_biextension(&h) {
                json["height_biextension"] = num(hb);
                rows.push(vec!["height_biextension".into(), text(hb)]);
            }
            Ok(Output::new(json, &["quantity", "value"], rows))
        }
        Quantity::LimitHeight => {
            let orbit = doc.orbit::<R>(tol)?;
            let orientation = doc.orientation::<R>()?.ok_or_else(|| CliError::from(HodgeError::Parse("missing orientation".into())))?;
            let lh = orbit.limit_height(&orientation)?;
            let m = orbit.relative_weight()?;
            let system = orbit.deligne_system()?;
            let weights: Vec<Value> = m.jumps().iter().map(|&k| json!({"weight": k, "dimension": m.dim(k)})).collect();
            let json = json!({
                "limit_height": num(lh),
                "limit_height_decimal": text(lh),
                "relative_weight": weights,
                "deligne_system_residual": system.residual,
            });
            let rows = vec![vec!["limit_height".into(), text(lh)], vec!["deligne_system_residual".into(), system.residual.to_string()]];
            Ok(Output::new(json, &["quantity", "value"], rows))
        }
    }
}

fn checks_output(name: &str, values: Value, checks: Vec<Check>) -> Output {
    let pass = checks.iter().all(Check::pass);
    eprintln!("{:<36} {:>24} {:>24} {:>10}  result", "check", "expected", "computed", "error");
    for c in &checks {
        eprintln!(
            "{:<36} {:>24.16e} {:>24.16e} {:>10.2e}  {}",
            c.name,
            c.expected,
            c.computed,
            c.error(),
            if c.pass() { "pass" } else { "FAIL" }
        );
    }
    let rows = checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                c.expected.to_string(),
                c.computed.to_string(),
                c.error().to_string(),
                c.tolerance.to_string(),
                c.pass().to_string(),
            ]
        })
        .collect();
    let check_json: Vec<Value> = checks
        .iter()
        .map(|c| json!({"name": c.name, "expected": c.expected, "computed": c.computed, "error": c.error(), "tolerance": c.tolerance, "pass": c.pass()}))
        .collect();
    let json = json!({"scenario": name, "values": values, "checks": check_json, "pass": pass});
    Output::new(json, &["check", "expected", "computed", "error", "tolerance", "pass"], rows).with_code(if pass { 0 } else { EXIT_INVALID })
}

fn triangle_from_json<R: Real>(path: &Path) -> Result<TriangleData<R>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::io(e.to_string()))?;
    let entry = |x: &Value| -> Result<Cx<R>, CliError> {
        match x.as_array().map(|a| a.as_slice()) {
            Some([re, im]) => match (re.as_f64(), im.as_f64()) {
                (Some(re), Some(im)) => Ok(from_c64(Complex64::new(re, im))),
                _ => Err(CliError::io("complex entries must be [re, im] numbers")),
            },
            _ => Err(CliError::io("complex entries must be [re, im] pairs")),
        }
    };
    let triple = |key: &str| -> Result<[Cx<R>; 3], CliError> {
        let arr = v[key].as_array().ok_or_else(|| CliError::io(format!("missing {key}")))?;
        if arr.len() != 3 {
            return Err(CliError::io(format!("{key} must have three entries")));
        }
        Ok([entry(&arr[0])?, entry(&arr[1])?, entry(&arr[2])?])
    };
    let mut t = TriangleData::new(triple("a")?, triple("b")?, triple("c")?);
    if !v["alpha"].is_null() {
        t.alpha = entry(&v["alpha"])?;
    }
    if !v["beta"].is_null() {
        t.beta = entry(&v["beta"])?;
    }
    Ok(t)
}

fn real_triangle<R: Real>() -> TriangleData<R> {
    let r = |xs: [f64; 3]| xs.map(|x| from_c64(Complex64::new(x, 0.0)));
    TriangleData::new(r([1.0, 2.0, -1.0]), r([3.0, 1.0, 1.0]), r([1.0, -2.0, 5.0]))
}

fn scenario<R: Real>(which: &ScenarioCommand, tol: f64) -> Result<Output, CliError> {
    match which {
        ScenarioCommand::Dilog { s } => {
            let r = scenarios::scenario_dilog::<R>(complex_arg(s)?, tol)?;
            let values = json!({"height": num(r.height), "height_decimal": text(r.height), "height_biextension": num(r.height_biextension), "bigrading_ok": r.bigrading_ok});
            Ok(checks_output("dilog", values, r.checks(tol)))
        }
        ScenarioCommand::Orbit6iii { z } => {
            let r = scenarios::scenario_orbit6iii::<R>(complex_arg(z)?, tol)?;
            let values = json!({"fiber_height": num(r.fiber_height), "fiber_height_decimal": text(r.fiber_height), "limit_height": num(r.limit_height)});
            Ok(checks_output("orbit6iii", values, r.checks(tol)))
        }
        ScenarioCommand::Triangle { t, input } => {
            let (data, real) = match (t, input) {
                (_, Some(path)) => (triangle_from_json::<R>(path)?, false),
                (Some(t), None) => (TriangleData::family(complex_arg(t)?), false),
                (None, None) => (real_triangle(), true),
            };
            let is_real = real || data.a.iter().chain(&data.b).chain(&data.c).all(|z| z.im == R::zero());
            let r = scenarios::scenario_triangle(&data, tol)?;
            let mut checks = r.checks(tol);
            if is_real {
                checks.push(Check::new("real coefficients give zero", 0.0, r.ht_nine.to_f64(), tol));
            }
            let dc: Vec<Vec<f64>> = r.delta_c.iter().map(|row| row.iter().map(|x| x.to_f64()).collect()).collect();
            let values = json!({"ht_nine": num(r.ht_nine), "ht_nine_decimal": text(r.ht_nine), "ht_six": num(r.ht_six), "delta_c": dc});
            Ok(checks_output("triangle", values, checks))
        }
        ScenarioCommand::Family { t } => {
            let r = scenarios::scenario_family::<R>(complex_arg(t)?)?;
            let limits: Vec<Value> = r.limit_values.iter().map(|a| json!({"point": a.point, "samples": a.samples})).collect();
            let values = json!({"height": num(r.height), "height_decimal": text(r.height), "closed_form": num(r.closed_form), "limit_values": limits});
            Ok(checks_output("family", values, r.checks(tol)))
        }
        ScenarioCommand::Dim0 { a, b } => {
            let r = scenarios::scenario_dim0::<R>(complex_arg(a)?, complex_arg(b)?, tol)?;
            let f = |v: &[R]| v.iter().map(|x| x.to_f64()).collect::<Vec<_>>();
            let values = json!({
                "height": num(r.height),
                "delta1": f(&r.spec.delta1),
                "delta2": f(&r.spec.delta2),
                "roundtrip_ok": r.roundtrip_ok(tol),
            });
            Ok(checks_output("dim0", values, r.checks(tol)))
        }
    }
}

fn sweep<R: Real>(doc: &Document, x: f64, y_min: f64, y_max: f64, count: usize, log: bool, tol: f64) -> Result<Output, CliError> {
    if count == 0 || y_min.is_nan() || y_min <= 0.0 || y_max < y_min {
        return Err(CliError::invalid("need count > 0 and 0 < y-min <= y-max"));
    }
    let v = doc.variation::<R>(tol)?;
    let ys: Vec<f64> = (0..count)
        .map(|k| {
            let f = if count == 1 { 0.0 } else { k as f64 / (count - 1) as f64 };
            if log {
                y_min * (y_max / y_min).powf(f)
            } else {
                y_min + (y_max - y_min) * f
            }
        })
        .collect();
    let path = ray(v.len(), R::from_f64(x), &ys.iter().map(|&y| R::from_f64(y)).collect::<Vec<_>>());
    let points = height_sweep(&v, &path)?;
    let mut code = 0;
    let mut rows = Vec::with_capacity(points.len());
    let mut json_points = Vec::with_capacity(points.len());
    for (p, &y) in points.iter().zip(&ys) {
        if p.identity_residual.is_some_and(|r| r > tol * y.max(1.0)) {
            code = EXIT_NUMERICAL;
        }
        let res = p.identity_residual.map_or(String::new(), |r| r.to_string());
        rows.push(vec![y.to_string(), text(p.height), res]);
        json_points.push(json!({"param": y, "height": num(p.height), "identity_residual": p.identity_residual}));
    }
    Ok(Output::new(json!({"points": json_points}), &["param", "height", "identity_residual"], rows).with_code(code))
}

fn example<R: Real>(which: &ExampleCommand, seed: u64, tol: f64) -> Result<Output, CliError> {
    let doc = match which {
        ExampleCommand::DilogFiber { s } => Document::from_oriented(&scenarios::dilog_fiber::<R>(complex_arg(s)?, tol)?),
        ExampleCommand::DilogVariation { terms } => Document::from_variation(&scenarios::dilog_variation::<R>(*terms, tol)?),
        ExampleCommand::Orbit6iii => {
            let (o, orientation) = scenarios::orbit6iii::<R>(tol)?;
            Document::from_orbit(&o, Some(&orientation))
        }
        ExampleCommand::Orbit6iiiVariation => Document::from_variation(&scenarios::orbit6iii_variation::<R>(tol)?),
        ExampleCommand::Split { middle } => {
            let types: Vec<(i32, i32)> =
                std::iter::once((0, 0)).chain(std::iter::repeat_n((-1, -1), *middle)).chain([(-2, -2)]).collect();
            let h = MixedHodgeStructure::<R>::split_hodge_tate(&types, tol);
            let mut d = Document::from_mhs(&h);
            d.orientation = Document::from_oriented(&hodge_core::height::OrientedMhs::new(
                h.clone(),
                hodge_core::height::Orientation::coordinate(types.len(), 0, types.len() - 1),
            )?)
            .orientation;
            d
        }
        ExampleCommand::RandomHodgeTate { ranks, nilpotents } => {
            Document::from_variation(&random_hodge_tate::<R>(ranks, *nilpotents, seed, tol)?)
        }
    };
    let json: Value = serde_json::to_value(&doc).map_err(|e| CliError::io(e.to_string()))?;
    Ok(Output::new(json, &[], Vec::new()))
}
