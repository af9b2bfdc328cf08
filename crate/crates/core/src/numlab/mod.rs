//! Numerical oracle: integrate, extract zeros and critical points, build
//! Trench's amplitude, and check the symbolic predictions against them.

pub mod dop853;
mod trace;

pub use trace::{integrate, trench_amplitude, Integration, NumTrace, TracePair, TrenchAmplitude};

use std::fmt::Write as _;

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diffops::{canonical_potential, Equation};
use crate::exactalg::{rat, RatFun};
use crate::oscillate::{classify, OscVerdict};
use crate::phaseseries::{solve_z_from_potential, z_to_phase, PhaseExpansion};
use crate::zerodist::{
    calibrate_k0, count_estimate, counting_model, predict_zeros_calibrated, zero_model,
    CountingModel, Spacing, Trend, ZeroError, ZeroLaw, ZeroModel,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumError {
    #[error("integration unreliable: tolerance {0:e} outside [1e-12, 1e-6]")]
    ToleranceOutOfRange(f64),
    #[error("invalid window [{0}, {1}]")]
    InvalidWindow(f64, f64),
    #[error("a coefficient has a pole in [{0}, {1}]")]
    PoleInWindow(f64, f64),
    #[error("integration unreliable: step size underflow at t = {0}")]
    StepUnderflow(f64),
    #[error("integration unreliable: non-finite state at t = {0}")]
    NonFinite(f64),
    #[error("integration unreliable: Wronskian drift {drift:e} exceeds {limit:e} at t = {t}")]
    WronskianDrift { drift: f64, limit: f64, t: f64 },
    #[error("zero count mismatch: {raw} sign changes but Prüfer angle gives {prufer}")]
    ZeroCountMismatch { raw: usize, prufer: usize },
    #[error("{count} critical points between consecutive zeros {lo} and {hi}")]
    CriticalPoints { lo: f64, hi: f64, count: usize },
    #[error("Trench amplitude needs the canonical form Y'' + qY = 0")]
    NotCanonical,
    #[error(transparent)]
    Prediction(#[from] ZeroError),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub value: Option<f64>,
    pub threshold: Option<f64>,
    pub detail: String,
}

impl Check {
    fn measured(name: &str, value: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: if value < threshold { CheckStatus::Pass } else { CheckStatus::Fail },
            value: Some(value),
            threshold: Some(threshold),
            detail: detail.into(),
        }
    }

    fn boolean(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            value: None,
            threshold: None,
            detail: detail.into(),
        }
    }

    fn skipped(name: &str, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: CheckStatus::Skipped,
            value: None,
            threshold: None,
            detail: detail.into(),
        }
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail
    }
}

/// Everything the symbolic side predicts for one potential.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Predictions {
    pub verdict: OscVerdict,
    pub phase: Option<PhaseExpansion>,
    pub model: Option<ZeroModel>,
    pub counting: Option<CountingModel>,
}

impl Predictions {
    /// `phase` is present when `q` tends to a positive constant; `order` is
    /// the truncation order of `z = 2 phi'`.
    pub fn for_potential(q: &RatFun, order: usize) -> Self {
        Predictions {
            verdict: classify(q),
            phase: solve_z_from_potential(q, order).ok().map(|z| z_to_phase(&z)),
            model: zero_model(q).ok(),
            counting: counting_model(q).ok(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub tol: f64,
    /// Number of trailing zeros used for eventual properties and rows.
    pub report_last: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tol: 1e-10,
            report_last: 50,
        }
    }
}

/// `[max(pole_free_bound + 1, 1), 2000]` over both coefficients.
pub fn default_window(eq: &Equation) -> (f64, f64) {
    let b = rat::to_f64(&eq.a.pole_free_bound()).max(rat::to_f64(&eq.b.pole_free_bound()));
    ((b + 1.0).max(1.0), 2000.0)
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ZeroRow {
    pub n: i64,
    pub s_n: f64,
    pub s_hat_n: Option<f64>,
    pub t_n: Option<f64>,
    pub abs_y_t_n: Option<f64>,
    pub v_t_n: Option<f64>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ZeroReport {
    pub q: RatFun,
    pub window: (f64, f64),
    pub tol: f64,
    pub predictions: Predictions,
    pub zeros: Vec<f64>,
    pub critical_points: Vec<f64>,
    /// `|y(t_n)|` at each critical point.
    pub amplitudes: Vec<f64>,
    /// `v(t_n)` at each critical point.
    pub trench: Vec<f64>,
    /// Index of the first measured zero under the leading law.
    pub index_offset: Option<i64>,
    pub predicted_leading: Vec<f64>,
    pub predicted_calibrated: Option<Vec<f64>>,
    pub relative_errors: Vec<f64>,
    pub spacings: Vec<f64>,
    pub ratios: Vec<f64>,
    pub count_measured: Option<f64>,
    pub count_estimate: Option<f64>,
    pub max_wronskian_drift: f64,
    pub checks: Vec<Check>,
    pub rows: Vec<ZeroRow>,
    pub passed: bool,
}

fn strictly(v: &[f64], increasing: bool) -> bool {
    v.windows(2).all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] })
}

/// Strict alternation of two increasing sequences.
pub fn interlace(a: &[f64], b: &[f64]) -> bool {
    let mut merged: Vec<(f64, u8)> = a.iter().map(|&x| (x, 0)).chain(b.iter().map(|&x| (x, 1))).collect();
    merged.sort_by(|x, y| x.0.total_cmp(&y.0));
    merged.windows(2).all(|w| w[0].1 != w[1].1 && w[0].0 < w[1].0)
}

fn tail<T>(v: &[T], k: usize) -> &[T] {
    &v[v.len().saturating_sub(k)..]
}

/// Integrates `Y'' + qY = 0` (and the original equation when `a != 0`)
/// over `window` and checks every available prediction.
pub fn verify(
    eq: &Equation,
    predictions: &Predictions,
    window: (f64, f64),
    opts: &VerifyOptions,
) -> Result<ZeroReport, NumError> {
    let q = canonical_potential(eq).q;
    let canonical_eq = Equation::canonical(q.clone());
    let (t0, t1) = window;
    let (pair, original) = std::thread::scope(|s| {
        let orig = (!eq.is_canonical()).then(|| s.spawn(|| integrate(eq, t0, t1, opts.tol)));
        let pair = integrate(&canonical_eq, t0, t1, opts.tol);
        (pair, orig.map(|h| h.join().expect("integration thread panicked")))
    });
    let pair = pair?;
    let original = original.transpose()?;
    let k = opts.report_last;
    let y1 = &pair.first;
    let zeros = y1.checked_zeros()?;
    let zeros2 = pair.second.checked_zeros()?;
    let crit = y1.extract_critical_points()?;
    let trench = trench_amplitude(&pair)?;
    let amplitudes: Vec<f64> = crit.iter().map(|&t| y1.value_at(t).0.abs()).collect();
    let vs: Vec<f64> = crit.iter().map(|&t| trench.eval(t)).collect();
    let spacings: Vec<f64> = zeros.windows(2).map(|w| w[1] - w[0]).collect();
    let ratios: Vec<f64> = zeros.windows(2).map(|w| w[1] / w[0]).collect();
    let mut checks = Vec::new();

    checks.push(Check::boolean(
        "sturm_separation",
        interlace(&zeros, &zeros2),
        format!("{} and {} zeros", zeros.len(), zeros2.len()),
    ));

    let prufer_dev = zeros
        .windows(2)
        .map(|w| (y1.theta_at(w[1]) - y1.theta_at(w[0]) - std::f64::consts::PI).abs())
        .fold(0.0, f64::max);
    checks.push(Check::measured("prufer_increment", prufer_dev, 1e-6, "max |dtheta - pi| between zeros"));

    let trench_res = amplitudes
        .iter()
        .zip(&vs)
        .map(|(a, v)| (a - v).abs() / v)
        .fold(0.0, f64::max);
    if crit.is_empty() {
        checks.push(Check::skipped("trench_identity", "no critical points"));
    } else {
        checks.push(Check::measured("trench_identity", trench_res, 1e-6, "max ||y(t_n)| - v(t_n)| / v(t_n)"));
    }

    let mut index_offset = None;
    let mut predicted_leading = Vec::new();
    let mut relative_errors = Vec::new();
    if let Some(model) = &predictions.model {
        if let Some(&s0) = zeros.first() {
            let n0 = model.index_of(s0);
            index_offset = Some(n0);
            predicted_leading = (0..zeros.len()).map(|j| model.predict((n0 + j as i64) as f64)).collect();
            relative_errors = zeros.iter().zip(&predicted_leading).map(|(s, p)| s / p - 1.0).collect();
        }
        checks.push(leading_check(model, &zeros, &relative_errors, &ratios, k));
        checks.push(spacing_check(&model.spacing, &spacings, k));
    } else if zeros.len() >= 3 {
        checks.push(Check::boolean(
            "zero_count",
            false,
            format!("{} zeros found for a non-oscillating potential", zeros.len()),
        ));
    }

    let (mut count_measured, mut count_est) = (None, None);
    if let Some(cm) = &predictions.counting {
        let cm = if cm.start < t0 { cm.clone().with_start(t0) } else { cm.clone() };
        if cm.start < t1 {
            let n = zeros.iter().filter(|&&s| s >= cm.start).count() as f64;
            let est = count_estimate(&cm, t1)?;
            count_measured = Some(n);
            count_est = Some(est);
            checks.push(Check::measured(
                "counting_function",
                (n - est).abs(),
                0.02 * n + 3.0,
                format!("N = {n}, estimate {est:.3} on [{}, {t1}]", cm.start),
            ));
        }
    }

    checks.push(sonin_polya_check(&q, &crit, &amplitudes, t0));

    let mut predicted_calibrated = None;
    match (&predictions.phase, zeros.first()) {
        (Some(phase), Some(&s0)) => {
            let k0 = calibrate_k0(phase, s0);
            let pc = predict_zeros_calibrated(phase, k0, s0, 0..=(zeros.len() as i64 - 1))?;
            let err = tail(&zeros, k)
                .iter()
                .zip(tail(&pc, k))
                .map(|(s, p)| (s - p).abs())
                .fold(0.0, f64::max);
            checks.push(Check::measured(
                "phase_calibrated",
                err,
                1e-2,
                format!("max |s_hat_n - s_n| over the last {} zeros", tail(&zeros, k).len()),
            ));
            predicted_calibrated = Some(pc);
        }
        _ => checks.push(Check::skipped("phase_calibrated", "no phase expansion or no zeros")),
    }

    if let Some(orig) = &original {
        let a0 = eq.a.eval_f64(t0);
        let matched = pair.combination(1.0, a0 / 2.0).checked_zeros()?;
        let direct = orig.first.checked_zeros()?;
        let dev = if matched.len() == direct.len() {
            matched.iter().zip(&direct).map(|(m, d)| (m - d).abs() / d.abs().max(1.0)).fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        checks.push(Check::measured(
            "gauge_invariance",
            dev,
            1e4 * opts.tol,
            format!("{} zeros of the original equation", direct.len()),
        ));
    }

    let rows = build_rows(
        &zeros,
        &crit,
        &amplitudes,
        &vs,
        index_offset,
        predicted_calibrated.as_deref().unwrap_or(&predicted_leading),
        k,
    );
    let passed = !checks.iter().any(Check::failed);
    Ok(ZeroReport {
        q,
        window,
        tol: opts.tol,
        predictions: predictions.clone(),
        zeros,
        critical_points: crit,
        amplitudes,
        trench: vs,
        index_offset,
        predicted_leading,
        predicted_calibrated,
        relative_errors,
        spacings,
        ratios,
        count_measured,
        count_estimate: count_est,
        max_wronskian_drift: pair.integration().max_drift(),
        checks,
        rows,
        passed,
    })
}

fn leading_check(model: &ZeroModel, zeros: &[f64], rel: &[f64], ratios: &[f64], k: usize) -> Check {
    match &model.law {
        ZeroLaw::LogLaw { .. } => {
            let limit = model.ratio_limit().unwrap();
            let far: Vec<f64> = zeros.iter().zip(ratios).filter(|(s, _)| **s > 10.0).map(|(_, r)| *r).collect();
            let r = tail(&far, k);
            if r.is_empty() {
                return Check::skipped("log_law_ratio", "fewer than two zeros beyond s = 10");
            }
            let dev = r.iter().map(|x| (x / limit - 1.0).abs()).fold(0.0, f64::max);
            Check::measured("log_law_ratio", dev, 1e-3, format!("s_(n+1)/s_n for s_n > 10 against e^(pi/d) = {limit:.6}"))
        }
        _ => {
            if zeros.len() < 2 {
                return Check::skipped("leading_law", "fewer than two zeros");
            }
            let dev = tail(rel, k).iter().map(|e| e.abs()).fold(0.0, f64::max);
            Check::measured("leading_law", dev, 0.05, "max |s_n / s_hat_n - 1| over the trailing zeros")
        }
    }
}

fn spacing_check(spacing: &Spacing, spacings: &[f64], k: usize) -> Check {
    let sp = tail(spacings, k);
    if sp.len() < 2 {
        return Check::skipped("spacing", "fewer than three zeros");
    }
    let last = *sp.last().unwrap();
    let (ok, detail) = match spacing {
        Spacing::IncreasingToInfinity => (strictly(sp, true), "strictly increasing".to_string()),
        Spacing::DecreasingToZero => (strictly(sp, false), "strictly decreasing".to_string()),
        Spacing::ConvergentSpacing { limit, trend } => {
            let inc = *trend == Trend::StrictlyIncreasing;
            (
                strictly(sp, inc) && (last / limit - 1.0).abs() < 0.05,
                format!("{trend:?} toward {limit:.6}, last spacing {last:.6}"),
            )
        }
        Spacing::EventuallyConstant { limit } => (
            sp.iter().all(|s| (s / limit - 1.0).abs() < 1e-6),
            format!("constant {limit:.6}"),
        ),
    };
    Check::boolean("spacing", ok, detail)
}

/// Beyond the last real zero of `q'`, `|y(t_n)|` moves against `q`.
fn sonin_polya_check(q: &RatFun, crit: &[f64], amps: &[f64], t0: f64) -> Check {
    let dq = q.derive();
    if dq.is_zero() {
        return Check::skipped("sonin_polya", "q is constant");
    }
    let start = dq
        .num()
        .largest_real_root(&rat::rat(1, 1_000_000))
        .map(|r| rat::to_f64(&r))
        .unwrap_or(f64::NEG_INFINITY)
        .max(t0);
    let increasing = dq.leading_form().map(|l| l.c.is_positive()).unwrap_or(false);
    let sel: Vec<f64> = crit
        .iter()
        .zip(amps)
        .filter(|(t, _)| **t > start)
        .map(|(_, a)| *a)
        .collect();
    if sel.len() < 3 {
        return Check::skipped("sonin_polya", "fewer than three critical points where q is monotone");
    }
    Check::boolean(
        "sonin_polya",
        strictly(&sel, !increasing),
        format!(
            "q {} beyond {start:.4}: |y(t_n)| strictly {} over {} critical points",
            if increasing { "increasing" } else { "decreasing" },
            if increasing { "decreasing" } else { "increasing" },
            sel.len()
        ),
    )
}

fn build_rows(
    zeros: &[f64],
    crit: &[f64],
    amps: &[f64],
    vs: &[f64],
    offset: Option<i64>,
    predicted: &[f64],
    k: usize,
) -> Vec<ZeroRow> {
    let start = zeros.len().saturating_sub(k);
    (start..zeros.len())
        .map(|j| {
            let s = zeros[j];
            let hi = zeros.get(j + 1).copied().unwrap_or(f64::INFINITY);
            let c = crit.iter().position(|&t| t > s && t < hi);
            ZeroRow {
                n: offset.unwrap_or(0) + j as i64,
                s_n: s,
                s_hat_n: predicted.get(j).copied(),
                t_n: c.map(|i| crit[i]),
                abs_y_t_n: c.map(|i| amps[i]),
                v_t_n: c.map(|i| vs[i]),
            }
        })
        .collect()
}

pub const CSV_HEADER: &str = "n,s_n,s_hat_n,t_n,abs_y_t_n,v_t_n";

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.12e}")).unwrap_or_default()
}

impl ZeroReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{:.12e},{},{},{},{}",
                r.n,
                r.s_n,
                opt(r.s_hat_n),
                opt(r.t_n),
                opt(r.abs_y_t_n),
                opt(r.v_t_n)
            );
        }
        out
    }
}

/// `t y -y v` columns on `samples` evenly spaced points, for plotting a
/// solution between its Trench envelope.
pub fn figure_data(pair: &TracePair, samples: usize) -> Result<String, NumError> {
    let v = trench_amplitude(pair)?;
    let (t0, t1) = pair.integration().window();
    let mut out = String::from("# t y -y v\n");
    for i in 0..samples {
        let t = t0 + (t1 - t0) * i as f64 / (samples - 1).max(1) as f64;
        let y = pair.first.value_at(t).0;
        let _ = writeln!(out, "{t:.10e} {y:.10e} {:.10e} {:.10e}", -y, v.eval(t));
    }
    Ok(out)
}

/// Parses `T0:T1`.
pub fn parse_window(s: &str) -> Option<(f64, f64)> {
    let (a, b) = s.split_once(':')?;
    let a: f64 = a.trim().parse().ok()?;
    let b: f64 = b.trim().parse().ok()?;
    (a.is_finite() && b.is_finite() && b > a).then_some((a, b))
}
