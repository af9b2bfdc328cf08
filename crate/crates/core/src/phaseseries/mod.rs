//! Exact asymptotic expansions of phase and amplitude for `Y'' + qY = 0`.
//!
//! With `z = 2 phi'` the phase satisfies `sigma(z) = 4q`. When
//! `q ~ c_0 + c_1/x + ...` with `c_0 > 0`, the ansatz
//! `z ~ z_0 + z_1/x + ...` turns this into a triangular system: the
//! coefficient of `x^{-j}` in `sigma(z)` is `2 z_0 z_j` plus terms in
//! `z_0..z_{j-1}`. All divisions are by powers of `z_0 = 2 sqrt(c_0)`, so
//! the coefficients stay in `Q(sqrt c_0)`.

pub mod series;

pub use series::{sigma_series, Series};

use std::cmp::Ordering;
use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::{rat, AlgError, CoeffExpansion, QuadExt, Rat, RatFun};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PhaseError {
    #[error("potential does not tend to a positive constant")]
    NoPositiveLimit,
    #[error("non-oscillating: critical coefficient {0} <= 1/4")]
    NonOscillating(String),
    #[error("invalid power law: need c > 0 and r > 0")]
    InvalidPowerLaw,
    #[error("expansion of the potential is only known to order {have}, need {need}")]
    OrderTooHigh { have: i64, need: usize },
    #[error(transparent)]
    Alg(#[from] AlgError),
}

/// `z = 2 phi' ~ sum_j z_j x^{-j}` with coefficients in `Q(sqrt m)`, `m = 4 c_0`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ZExpansion {
    #[serde(with = "rat::serde_str")]
    pub radicand: Rat,
    pub coeffs: Vec<QuadExt>,
}

/// `phi ~ linear x + logcoeff log x + C + sum_{j>=1} tail[j-1] x^{-j}`.
/// The constant `C` is free and never assigned.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PhaseExpansion {
    pub linear: QuadExt,
    pub logcoeff: QuadExt,
    pub tail: Vec<QuadExt>,
    #[serde(with = "rat::serde_str")]
    pub radicand: Rat,
}

/// Amplitude `g = (phi')^{-1/2} = scale * sum_j coeffs[j] x^{-j}` with
/// `coeffs[0] = 1`; `scale = c_0^{-1/4}` is irrational in general and kept
/// as a float.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct AmplitudeExpansion {
    pub scale: f64,
    pub coeffs: Vec<QuadExt>,
}

/// Leading law `phi ~ (2 sqrt(c) / r) x^{r/2}` for `q ~ c x^{-2+r}`, along
/// with `phi' ~ sqrt(q)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PowerPhase {
    #[serde(with = "rat::serde_str")]
    pub c: Rat,
    #[serde(with = "rat::serde_str")]
    pub r: Rat,
    /// `2 sqrt(c) / r`, in `Q(sqrt(4c))`.
    pub coefficient: QuadExt,
    #[serde(with = "rat::serde_str")]
    pub exponent: Rat,
}

/// `phi ~ d log x`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LogPhase {
    pub d: QuadExt,
}

/// Solves `sigma(z) = 4q` coefficientwise up to `z_order`.
pub fn solve_z_expansion(q_exp: &CoeffExpansion, z_order: usize) -> Result<ZExpansion, PhaseError> {
    if q_exp.order < z_order as i64 {
        return Err(PhaseError::OrderTooHigh {
            have: q_exp.order,
            need: z_order,
        });
    }
    let c0 = q_exp.coeff(0);
    if !c0.is_positive() {
        return Err(PhaseError::NoPositiveLimit);
    }
    let m = &c0 * rat::int(4);
    let z0 = QuadExt::sqrt(&m);
    let zero = QuadExt::zero(&m);
    let two_z0 = z0.scale(&rat::int(2));
    let four = rat::int(4);
    let mut z = vec![zero.clone(); z_order + 1];
    z[0] = z0;
    for j in 1..=z_order {
        // with z_j = 0 the coefficient of x^{-j} lacks exactly 2 z_0 z_j
        let partial = sigma_series(&Series::new(z[..=j].to_vec()));
        let target = QuadExt::rational(q_exp.coeff(j as i64) * &four, &m);
        z[j] = (target - partial.coeffs()[j].clone()) / two_z0.clone();
    }
    Ok(ZExpansion { radicand: m, coeffs: z })
}

/// Expands `q` at infinity and solves for `z`.
pub fn solve_z_from_potential(q: &RatFun, z_order: usize) -> Result<ZExpansion, PhaseError> {
    let lf = q.leading_form().map_err(|_| PhaseError::NoPositiveLimit)?;
    if lf.k != 0 {
        return Err(PhaseError::NoPositiveLimit);
    }
    solve_z_expansion(&q.expand_at_infinity(z_order as i64)?, z_order)
}

impl ZExpansion {
    /// `sigma(z)` recombined as a truncated series.
    pub fn sigma(&self) -> Series<QuadExt> {
        sigma_series(&Series::new(self.coeffs.clone()))
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Termwise integration of `phi' = z/2`.
pub fn z_to_phase(z: &ZExpansion) -> PhaseExpansion {
    let half = rat::rat(1, 2);
    let m = &z.radicand;
    let linear = z.coeffs[0].scale(&half);
    let logcoeff = z
        .coeffs
        .get(1)
        .map(|c| c.scale(&half))
        .unwrap_or_else(|| QuadExt::zero(m));
    let tail = (2..z.coeffs.len())
        .map(|i| {
            let j = (i - 1) as i64;
            z.coeffs[i].scale(&Rat::new((-1).into(), (2 * j).into()))
        })
        .collect();
    PhaseExpansion {
        linear,
        logcoeff,
        tail,
        radicand: m.clone(),
    }
}

/// `g = (z/2)^{-1/2}` to order `order` via the binomial series.
pub fn amplitude_from_phase(z: &ZExpansion, order: usize) -> AmplitudeExpansion {
    let m = &z.radicand;
    let z0 = z.coeffs[0].clone();
    let normalized: Vec<QuadExt> = (0..=order)
        .map(|j| {
            z.coeffs
                .get(j)
                .map(|c| c.clone() / z0.clone())
                .unwrap_or_else(|| QuadExt::zero(m))
        })
        .collect();
    let g = Series::new(normalized).pow_rat(&rat::rat(-1, 2));
    AmplitudeExpansion {
        scale: (z0.to_f64() / 2.0).powf(-0.5),
        coeffs: g.coeffs().to_vec(),
    }
}

pub fn power_phase(c: &Rat, r: &Rat) -> Result<PowerPhase, PhaseError> {
    if !c.is_positive() || !r.is_positive() {
        return Err(PhaseError::InvalidPowerLaw);
    }
    let m = c * rat::int(4);
    Ok(PowerPhase {
        c: c.clone(),
        r: r.clone(),
        coefficient: QuadExt::sqrt(&m).scale(&r.recip()),
        exponent: r * rat::rat(1, 2),
    })
}

/// For `q ~ c_q x^{-2}` returns `d = sqrt(c_q - 1/4)`, with `phi ~ d log x`.
pub fn log_phase(c_q: &Rat) -> Result<QuadExt, PhaseError> {
    let m = c_q - rat::rat(1, 4);
    if !m.is_positive() {
        return Err(PhaseError::NonOscillating(rat::to_string(c_q)));
    }
    Ok(QuadExt::sqrt(&m))
}

/// A phase function evaluable in floating point, increasing eventually.
pub trait PhaseFn {
    fn value(&self, x: f64) -> f64;
    fn derivative(&self, x: f64) -> f64;

    /// Solves `value(x) = target` for `x >= lo` by bracketing and Newton.
    fn invert(&self, target: f64, lo: f64) -> Option<f64> {
        let mut a = lo;
        if self.value(a) > target {
            return None;
        }
        let mut b = (2.0 * a).max(a + 1.0);
        let mut guard = 0;
        while self.value(b) < target {
            a = b;
            b *= 2.0;
            guard += 1;
            if guard > 2000 || !b.is_finite() {
                return None;
            }
        }
        let mut x = 0.5 * (a + b);
        let tol = 1e-14 * target.abs().max(1.0);
        for _ in 0..200 {
            let fx = self.value(x) - target;
            if fx.abs() <= tol || (b - a) <= 4.0 * f64::EPSILON * b.abs() {
                break;
            }
            if fx > 0.0 {
                b = x;
            } else {
                a = x;
            }
            let d = self.derivative(x);
            let newton = x - fx / d;
            x = if d > 0.0 && newton > a && newton < b {
                newton
            } else {
                0.5 * (a + b)
            };
        }
        Some(x)
    }
}

impl PhaseFn for PhaseExpansion {
    fn value(&self, x: f64) -> f64 {
        let mut v = self.linear.to_f64() * x + self.logcoeff.to_f64() * x.ln();
        let t = x.recip();
        let mut p = t;
        for c in &self.tail {
            v += c.to_f64() * p;
            p *= t;
        }
        v
    }

    fn derivative(&self, x: f64) -> f64 {
        let mut v = self.linear.to_f64() + self.logcoeff.to_f64() / x;
        let t = x.recip();
        let mut p = t * t;
        for (j, c) in self.tail.iter().enumerate() {
            v -= (j as f64 + 1.0) * c.to_f64() * p;
            p *= t;
        }
        v
    }
}

impl PhaseFn for PowerPhase {
    fn value(&self, x: f64) -> f64 {
        self.coefficient.to_f64() * x.powf(rat::to_f64(&self.exponent))
    }

    fn derivative(&self, x: f64) -> f64 {
        let e = rat::to_f64(&self.exponent);
        self.coefficient.to_f64() * e * x.powf(e - 1.0)
    }
}

impl PhaseFn for LogPhase {
    fn value(&self, x: f64) -> f64 {
        self.d.to_f64() * x.ln()
    }

    fn derivative(&self, x: f64) -> f64 {
        self.d.to_f64() / x
    }
}

impl AmplitudeExpansion {
    pub fn eval(&self, x: f64) -> f64 {
        let t = x.recip();
        let mut p = 1.0;
        let mut v = 0.0;
        for c in &self.coeffs {
            v += c.to_f64() * p;
            p *= t;
        }
        self.scale * v
    }
}

fn superscript(n: i64) -> String {
    let digits = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let mut s = String::from("⁻");
    for ch in n.to_string().chars() {
        s.push(digits[ch.to_digit(10).unwrap() as usize]);
    }
    s
}

/// `(sign, magnitude-with-unit)` for a term `c * unit`.
fn term(c: &QuadExt, unit: &str, joiner: &str) -> (bool, String) {
    let neg = c.signum() == Ordering::Less;
    let mag = if neg { -c.clone() } else { c.clone() };
    let one = QuadExt::one(&c.m);
    let body = if mag == one && !unit.is_empty() {
        unit.to_string()
    } else if mag.is_rational() && mag.a.is_integer() {
        format!("{}{}", rat::to_string(&mag.a), if unit.is_empty() { "" } else { joiner })
            + unit
    } else {
        format!("{mag}·{unit}")
    };
    (neg, body)
}

impl fmt::Display for PhaseExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(bool, String)> = Vec::new();
        if !self.linear.is_zero() {
            parts.push(term(&self.linear, "x", ""));
        }
        if !self.logcoeff.is_zero() {
            parts.push(term(&self.logcoeff, "log x", " "));
        }
        parts.push((false, "C".into()));
        let last = self.tail.iter().rposition(|c| !c.is_zero());
        if let Some(last) = last {
            for (j, c) in self.tail.iter().enumerate().take(last + 1) {
                let unit = format!("x{}", superscript(j as i64 + 1));
                if c.is_zero() {
                    parts.push((false, format!("0·{unit}")));
                } else {
                    let (neg, body) = term(c, &unit, "·");
                    parts.push((neg, body));
                }
            }
        }
        let mut out = String::new();
        for (i, (neg, body)) in parts.iter().enumerate() {
            match (i, neg) {
                (0, true) => out.push_str(&format!("-{body}")),
                (0, false) => out.push_str(body),
                (_, true) => out.push_str(&format!(" - {body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
            }
        }
        if last.is_some() {
            out.push_str(" + …");
        }
        write!(f, "{out}")
    }
}

impl PhaseExpansion {
    /// Coefficient of `x^{-j}` for `j >= 1`; zero beyond the tail.
    pub fn tail_coeff(&self, j: usize) -> QuadExt {
        self.tail
            .get(j - 1)
            .cloned()
            .unwrap_or_else(|| QuadExt::zero(&self.radicand))
    }

    pub fn is_rational(&self) -> bool {
        self.linear.is_rational()
            && self.logcoeff.is_rational()
            && self.tail.iter().all(QuadExt::is_rational)
    }
}

/// Identities for the first five coefficients of `sigma(z)` in terms of
/// `z_0..z_4`, written out in closed form.
pub fn sigma_coefficient_identities(z: &[Rat; 5]) -> [Rat; 5] {
    let [z0, z1, z2, z3, z4] = z;
    let two = rat::int(2);
    [
        z0 * z0,
        &two * z0 * z1,
        z1 * z1 + &two * z0 * z2,
        &two * (z0 * z1 * z2 + &two * z1 + z0 * z0 * z3) / z0,
        (rat::int(-7) * z1 * z1
            + &two * z0 * z0 * z1 * z3
            + z0 * z0 * z2 * z2
            + rat::int(12) * z0 * z2
            + &two * z0 * z0 * z0 * z4)
            / (z0 * z0),
    ]
}

impl ZExpansion {
    pub fn is_zero_beyond_leading(&self) -> bool {
        self.coeffs.iter().skip(1).all(|c| c.is_zero())
    }
}
