//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each exported function takes strings and numbers and returns a JSON
//! string; errors become a thrown JS string. The `*_json` functions do the
//! work and are callable natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use oscphase::diffops::{canonical_potential, Equation};
use oscphase::exactalg::{parse_ratfun, RatFun};
use oscphase::numlab::{integrate, trench_amplitude, verify, Check, Predictions, VerifyOptions};
use oscphase::oscillate::{classify, OscVerdict};
use oscphase::phaseseries::{solve_z_from_potential, z_to_phase};

pub const TOL: f64 = 1e-10;
pub const MAX_SAMPLES: usize = 20_000;

#[derive(Serialize)]
pub struct Analysis {
    pub q: String,
    pub verdict: OscVerdict,
    pub summary: String,
    /// Present when `q` tends to a positive constant.
    pub phase: Option<String>,
    pub phase_error: Option<String>,
}

#[derive(Serialize)]
pub struct Plot {
    pub t: Vec<f64>,
    pub y: Vec<f64>,
    pub v: Vec<f64>,
    pub zeros: Vec<f64>,
}

#[derive(Serialize)]
pub struct Verification {
    pub passed: bool,
    pub zeros: usize,
    pub checks: Vec<Check>,
}

fn parse(what: &str, s: &str) -> Result<RatFun, String> {
    parse_ratfun(s).map_err(|e| format!("{what}: {e}"))
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

fn summary(v: &OscVerdict) -> String {
    match &v.leading {
        Some(lf) => format!("{:?} ({:?}): q ~ {}·x^{}", v.verdict, v.rule, lf.c, lf.k),
        None => format!("{:?} ({:?}): q = 0", v.verdict, v.rule),
    }
}

/// Reduces `Y'' + aY' + bY = 0`, classifies it and expands the phase.
pub fn analyze_json(a: &str, b: &str, order: usize) -> Result<String, String> {
    let eq = Equation::new(parse("a", a)?, parse("b", b)?);
    let q = canonical_potential(&eq).q;
    let verdict = classify(&q);
    let (phase, phase_error) = match solve_z_from_potential(&q, order) {
        Ok(z) => (Some(z_to_phase(&z).to_string()), None),
        Err(e) => (None, Some(e.to_string())),
    };
    to_json(&Analysis {
        q: q.to_string(),
        summary: summary(&verdict),
        verdict,
        phase,
        phase_error,
    })
}

fn window(t0: f64, t1: f64) -> Result<(), String> {
    if t0.is_finite() && t1.is_finite() && t1 > t0 {
        Ok(())
    } else {
        Err(format!("invalid window [{t0}, {t1}]"))
    }
}

/// Samples the solution with `y(t0) = 0, y'(t0) = 1` and its Trench
/// envelope on `samples` evenly spaced points.
pub fn plot_json(q: &str, t0: f64, t1: f64, samples: usize) -> Result<String, String> {
    window(t0, t1)?;
    let samples = samples.clamp(2, MAX_SAMPLES);
    let pair = integrate(&Equation::canonical(parse("q", q)?), t0, t1, TOL).map_err(|e| e.to_string())?;
    let env = trench_amplitude(&pair).map_err(|e| e.to_string())?;
    let y2 = &pair.second;
    let mut plot = Plot {
        t: Vec::with_capacity(samples),
        y: Vec::with_capacity(samples),
        v: Vec::with_capacity(samples),
        zeros: y2.extract_zeros(),
    };
    for i in 0..samples {
        let t = t0 + (t1 - t0) * i as f64 / (samples - 1) as f64;
        plot.t.push(t);
        plot.y.push(y2.value_at(t).0);
        plot.v.push(env.eval(t));
    }
    to_json(&plot)
}

/// Runs every check on `Y'' + qY = 0` over `[t0, t1]`.
pub fn verify_json(q: &str, t0: f64, t1: f64, order: usize) -> Result<String, String> {
    window(t0, t1)?;
    let q = parse("q", q)?;
    let pr = Predictions::for_potential(&q, order);
    let opts = VerifyOptions {
        tol: TOL,
        report_last: 50,
    };
    let r = verify(&Equation::canonical(q), &pr, (t0, t1), &opts).map_err(|e| e.to_string())?;
    to_json(&Verification {
        passed: r.passed,
        zeros: r.zeros.len(),
        checks: r.checks,
    })
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn analyze(a: &str, b: &str, order: usize) -> Result<String, JsValue> {
    js(analyze_json(a, b, order))
}

#[wasm_bindgen]
pub fn plot(q: &str, t0: f64, t1: f64, samples: usize) -> Result<String, JsValue> {
    js(plot_json(q, t0, t1, samples))
}

#[wasm_bindgen(js_name = verify)]
pub fn verify_js(q: &str, t0: f64, t1: f64, order: usize) -> Result<String, JsValue> {
    js(verify_json(q, t0, t1, order))
}
