//! Closed-form laws for the zeros of oscillating solutions of
//! `Y'' + qY = 0`.
//!
//! Conversion from the 4-normalization `4Y'' + fY = 0`, `f = 4q`:
//!
//! | quantity            | in terms of `f`              | in terms of `q`                |
//! |---------------------|------------------------------|--------------------------------|
//! | limit spacing       | `2 pi / sqrt(f_inf)`         | `pi / sqrt(q_inf)`             |
//! | log-law rate `d`    | `sqrt(c_f - 1) / 2`          | `sqrt(c_q - 1/4)`              |
//! | power law `s_n`     | `(r pi n / sqrt(c_f))^{2/r}` | `(r pi n / (2 sqrt(c_q)))^{2/r}` |
//! | counting function   | `(1/2pi) int sqrt(f)`        | `(1/pi) int sqrt(q)`           |

use std::cell::Cell;
use std::f64::consts::{E, PI};

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::{rat, F64Fn, QuadExt, Rat, RatFun};
use crate::oscillate::classify;
use crate::phaseseries::{log_phase, power_phase, LogPhase, PhaseFn};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZeroError {
    #[error("potential does not generate oscillation")]
    NotOscillating,
    #[error("Wiman hypothesis fails: need q > 0 eventually and q > 1/x^2")]
    WimanHypothesis,
    #[error("potential is not positive on [{0}, t]")]
    NotPositive(f64),
    #[error("phase inversion failed for n = {0}")]
    Inversion(i64),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "law")]
pub enum ZeroLaw {
    /// `q ~ c x^{-2+r}`: `s_n ~ (r pi n / (2 sqrt c))^{2/r}`.
    PowerLaw {
        #[serde(with = "rat::serde_str")]
        c: Rat,
        #[serde(with = "rat::serde_str")]
        r: Rat,
    },
    /// `q ~ c x^{-2}`, `d = sqrt(c - 1/4)`: `log s_n ~ pi n / d`.
    LogLaw { d: QuadExt },
    /// `q = c` exactly: `s_{n+1} - s_n = pi / sqrt c`.
    ConstantFreq {
        #[serde(with = "rat::serde_str")]
        c: Rat,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Trend {
    StrictlyDecreasing,
    StrictlyIncreasing,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(tag = "spacing")]
pub enum Spacing {
    IncreasingToInfinity,
    DecreasingToZero,
    ConvergentSpacing { limit: f64, trend: Trend },
    EventuallyConstant { limit: f64 },
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ZeroModel {
    pub law: ZeroLaw,
    pub spacing: Spacing,
}

pub fn zero_model(q: &RatFun) -> Result<ZeroModel, ZeroError> {
    let v = classify(q);
    if !v.oscillates() {
        return Err(ZeroError::NotOscillating);
    }
    let lf = v.leading.expect("oscillating potentials are nonzero");
    if let Some(c) = q.as_constant() {
        let limit = PI / rat::to_f64(&c).sqrt();
        return Ok(ZeroModel {
            law: ZeroLaw::ConstantFreq { c },
            spacing: Spacing::EventuallyConstant { limit },
        });
    }
    let law = if lf.k > -2 {
        ZeroLaw::PowerLaw {
            c: lf.c.clone(),
            r: rat::int(lf.k + 2),
        }
    } else {
        ZeroLaw::LogLaw {
            d: log_phase(&lf.c).map_err(|_| ZeroError::NotOscillating)?,
        }
    };
    let spacing = match lf.k {
        k if k < 0 => Spacing::IncreasingToInfinity,
        k if k > 0 => Spacing::DecreasingToZero,
        _ => {
            let rest = q - &RatFun::constant(lf.c.clone());
            let below = rest
                .leading_form()
                .map(|l| l.c.is_negative())
                .expect("non-constant potential");
            Spacing::ConvergentSpacing {
                limit: PI / rat::to_f64(&lf.c).sqrt(),
                trend: if below {
                    Trend::StrictlyDecreasing
                } else {
                    Trend::StrictlyIncreasing
                },
            }
        }
    };
    Ok(ZeroModel { law, spacing })
}

impl ZeroModel {
    /// Leading-order prediction for the n-th zero, no constant calibration.
    pub fn predict(&self, n: f64) -> f64 {
        match &self.law {
            ZeroLaw::PowerLaw { c, r } => {
                let (c, r) = (rat::to_f64(c), rat::to_f64(r));
                (r * PI * n / (2.0 * c.sqrt())).powf(2.0 / r)
            }
            ZeroLaw::LogLaw { d } => (PI * n / d.to_f64()).exp(),
            ZeroLaw::ConstantFreq { c } => PI * n / rat::to_f64(c).sqrt(),
        }
    }

    /// `e^{pi/d}` for the log law.
    pub fn ratio_limit(&self) -> Option<f64> {
        match &self.law {
            ZeroLaw::LogLaw { d } => Some((PI / d.to_f64()).exp()),
            ZeroLaw::PowerLaw { .. } => Some(1.0),
            ZeroLaw::ConstantFreq { .. } => Some(1.0),
        }
    }

    /// The leading phase whose level sets `phi = n pi` give [`predict`](Self::predict).
    pub fn leading_phase(&self) -> Box<dyn PhaseFn + Send + Sync> {
        match &self.law {
            ZeroLaw::PowerLaw { c, r } => {
                Box::new(power_phase(c, r).expect("valid power law"))
            }
            ZeroLaw::LogLaw { d } => Box::new(LogPhase { d: d.clone() }),
            ZeroLaw::ConstantFreq { c } => Box::new(
                power_phase(c, &rat::int(2)).expect("positive constant"),
            ),
        }
    }

    /// Integer index of a zero at `s` under the leading law,
    /// `round(phi(s) / pi)`.
    pub fn index_of(&self, s: f64) -> i64 {
        (self.leading_phase().value(s) / PI).round() as i64
    }
}

/// Leading-order predictions `s_n` for `n` in `range`.
pub fn predict_zeros(model: &ZeroModel, range: std::ops::RangeInclusive<i64>) -> Vec<f64> {
    range.map(|n| model.predict(n as f64)).collect()
}

/// `phi(s_n) = (k0 + n) pi` solved for `s_n`, searching upward from `lo`.
pub fn predict_zeros_calibrated(
    phase: &dyn PhaseFn,
    k0: f64,
    lo: f64,
    range: std::ops::RangeInclusive<i64>,
) -> Result<Vec<f64>, ZeroError> {
    let mut out = Vec::new();
    let mut floor = lo;
    for n in range {
        let s = phase
            .invert((k0 + n as f64) * PI, floor)
            .ok_or(ZeroError::Inversion(n))?;
        out.push(s);
        floor = s;
    }
    Ok(out)
}

/// `k0` with `phi(s0) = k0 pi`, so that the calibrated `s_0` is the measured one.
pub fn calibrate_k0(phase: &dyn PhaseFn, s0: f64) -> f64 {
    phase.value(s0) / PI
}

/// `N(t) ~ (1/pi) int_e^t sqrt(q)`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct CountingModel {
    pub q: RatFun,
    pub start: f64,
}

/// Counting model starting at `e`, or right of the last real zero or
/// pole of `q` if that lies beyond `e`.
pub fn counting_model(q: &RatFun) -> Result<CountingModel, ZeroError> {
    let lf = q.leading_form().map_err(|_| ZeroError::WimanHypothesis)?;
    if lf.k <= -2 || !lf.c.is_positive() {
        return Err(ZeroError::WimanHypothesis);
    }
    let bound = rat::to_f64(&q.sign_stable_bound());
    Ok(CountingModel {
        q: q.clone(),
        start: if bound >= E { bound + 1.0 } else { E },
    })
}

impl CountingModel {
    pub fn with_start(mut self, start: f64) -> Self {
        self.start = start;
        self
    }
}

/// Integrates over geometric panels `[a, 2a]` so that long windows keep
/// the relative accuracy of short ones.
pub fn count_estimate(cm: &CountingModel, t: f64) -> Result<f64, ZeroError> {
    if t <= cm.start {
        return Ok(0.0);
    }
    let f = F64Fn::new(&cm.q);
    let bad = Cell::new(None);
    let g = |x: f64| {
        let v = f.eval(x);
        if v < 0.0 {
            bad.set(Some(x));
        }
        v.max(0.0).sqrt()
    };
    let mut total = 0.0;
    let mut a = cm.start;
    while a < t {
        let b = (2.0 * a).max(a + 1.0).min(t);
        total += quadrature::integrate(g, a, b, 1e-12 * (b - a)).integral;
        a = b;
    }
    if let Some(x) = bad.get() {
        return Err(ZeroError::NotPositive(x));
    }
    Ok(total / PI)
}
