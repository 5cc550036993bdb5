//! Browser bindings. Every export takes a JSON problem description and returns an
//! `attain-kit/1` JSON document.
//!
//! ```json
//! {"N": 5, "p": "2", "q": "critical", "gamma": 3, "weight": 100}
//! {"N": 3, "s": "1/2", "gamma": 3, "weight": 1, "constant": 0.5}
//! ```
//!
//! `constant` is required outside the critical local regime; there the sharp
//! Sobolev constant is computed.

use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

use attain_kit::classify::{classify, sweep_gamma, Constants, SweepRow, Verdict};
use attain_kit::constants::{sobolev_constant, DEFAULT_RESOLUTION};
use attain_kit::curves::{sample_curves, CurveParams, CurveSample};
use attain_kit::output::document;
use attain_kit::params::{Exponent, Problem, ProblemParams, Regime, Target};

const MAX_POINTS: usize = 20_000;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Request {
    #[serde(rename = "N")]
    n: u32,
    p: Option<String>,
    s: Option<String>,
    q: Option<String>,
    gamma: f64,
    weight: f64,
    constant: Option<f64>,
}

fn exponent(name: &str, text: &str) -> Result<Exponent, String> {
    text.parse().map_err(|e| format!("{name}: {e}"))
}

fn parse(json: &str) -> Result<(Problem, Constants), String> {
    let r: Request = serde_json::from_str(json).map_err(|e| e.to_string())?;
    let q = match r.q.as_deref().map(str::trim) {
        None | Some("") | Some("critical") => Target::Critical,
        Some(v) => Target::Value(exponent("q", v)?),
    };
    let params = match (&r.p, &r.s) {
        (Some(p), None) => ProblemParams::local(r.n, exponent("p", p)?, q, r.gamma, r.weight),
        (None, Some(s)) => ProblemParams::fractional(r.n, exponent("s", s)?, q, r.gamma, r.weight),
        _ => return Err("give exactly one of p and s".to_string()),
    };
    let problem = Problem::new(params).map_err(|e| e.to_string())?;
    let constants = match (problem.regime, r.constant) {
        (Regime::CriticalLocal, None) => {
            let s = sobolev_constant(problem.n(), problem.exponents.base, DEFAULT_RESOLUTION)
                .map_err(|e| e.to_string())?;
            Constants::sobolev(s.value)
        }
        (Regime::CriticalLocal, Some(c)) => Constants::sobolev(c),
        (Regime::SubcriticalLocal, Some(c)) => Constants::gns(c),
        (_, Some(c)) => Constants::fractional(c),
        (regime, None) => return Err(format!("a sharp constant is required for regime {regime:?}")),
    };
    Ok((problem, constants))
}

fn emit<T: Serialize>(body: &T) -> Result<String, String> {
    document(body).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct ClassifyDoc<'a> {
    #[serde(flatten)]
    verdict: &'a Verdict,
    constants: Constants,
}

#[derive(Serialize)]
struct CurveDoc<'a> {
    #[serde(rename = "D")]
    d: f64,
    t_star: Option<f64>,
    rows: &'a [CurveSample],
}

#[derive(Serialize)]
struct SweepDoc<'a> {
    rows: &'a [SweepRow],
}

/// Verdict plus the constants used.
pub fn classify_json(request: &str) -> Result<String, String> {
    let (problem, constants) = parse(request)?;
    let v = classify(&problem, &constants).map_err(|e| e.to_string())?;
    emit(&ClassifyDoc {
        verdict: &v,
        constants,
    })
}

/// `count` samples of `f`, `g`, `h` and `m` on `[t_min, t_max]`, with `D` and `t_star`.
pub fn curves_json(request: &str, t_min: f64, t_max: f64, count: usize) -> Result<String, String> {
    if count > MAX_POINTS {
        return Err(format!("at most {MAX_POINTS} points"));
    }
    let (problem, constants) = parse(request)?;
    let c = constants.weight(&problem).map_err(|e| e.to_string())?;
    let cp = CurveParams::for_problem(&problem, c).map_err(|e| e.to_string())?;
    let rows = sample_curves(&cp, t_min, t_max, count).map_err(|e| e.to_string())?;
    let v = classify(&problem, &constants).map_err(|e| e.to_string())?;
    emit(&CurveDoc {
        d: v.d,
        t_star: v.t_star,
        rows: &rows,
    })
}

/// Threshold and verdict for `gamma` in `start, start + step, ..., stop`.
pub fn sweep_json(request: &str, start: f64, stop: f64, step: f64) -> Result<String, String> {
    if !(start > 0.0 && stop >= start && step > 0.0 && stop.is_finite()) {
        return Err("need 0 < start <= stop and step > 0".to_string());
    }
    let count = ((stop - start) / step + 0.5).floor();
    if count >= MAX_POINTS as f64 {
        return Err(format!("at most {MAX_POINTS} points"));
    }
    let gammas: Vec<f64> = (0..=count as usize).map(|i| start + step * i as f64).collect();
    let (problem, constants) = parse(request)?;
    let rows = sweep_gamma(&problem, &constants, &gammas).map_err(|e| e.to_string())?;
    emit(&SweepDoc { rows: &rows })
}

#[wasm_bindgen(js_name = classify)]
pub fn classify_js(request: &str) -> Result<String, JsError> {
    classify_json(request).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = curves)]
pub fn curves_js(request: &str, t_min: f64, t_max: f64, count: usize) -> Result<String, JsError> {
    curves_json(request, t_min, t_max, count).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = sweep)]
pub fn sweep_js(request: &str, start: f64, stop: f64, step: f64) -> Result<String, JsError> {
    sweep_json(request, start, stop, step).map_err(|e| JsError::new(&e))
}
