//! Oscillation test for `Y'' + qY = 0` with `q` in Q(x), and the
//! iterated-logarithm germs used as comparison functions.
//!
//! With `q ~ c x^k`, solutions oscillate iff `k > -2, c > 0` or
//! `k = -2, c > 1/4`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::{rat, F64Fn, LeadingForm, Rat, RatFun};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OscError {
    #[error("t = {t} is below the threshold of the depth-{n} log tower")]
    Domain { n: usize, t: f64 },
    #[error("potential has a pole at t = {0}")]
    Pole(f64),
    #[error("potential is identically zero")]
    ZeroPotential,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Verdict {
    Oscillates,
    NonOscillating,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Rule {
    SupercriticalPower,
    CriticalCoefficient,
    SubcriticalOrNegative,
}

/// Serialized flat as `{verdict, rule, c, k}`; `c` and `k` are absent for
/// `q = 0`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct OscVerdict {
    pub verdict: Verdict,
    pub rule: Rule,
    #[serde(flatten)]
    pub leading: Option<LeadingForm>,
}

impl OscVerdict {
    pub fn oscillates(&self) -> bool {
        self.verdict == Verdict::Oscillates
    }
}

pub fn classify(q: &RatFun) -> OscVerdict {
    let Ok(lf) = q.leading_form() else {
        return OscVerdict {
            verdict: Verdict::NonOscillating,
            rule: Rule::SubcriticalOrNegative,
            leading: None,
        };
    };
    let (verdict, rule) = if lf.k > -2 && lf.c.is_positive() {
        (Verdict::Oscillates, Rule::SupercriticalPower)
    } else if lf.k == -2 && lf.c > rat::rat(1, 4) {
        (Verdict::Oscillates, Rule::CriticalCoefficient)
    } else {
        (Verdict::NonOscillating, Rule::SubcriticalOrNegative)
    };
    OscVerdict {
        verdict,
        rule,
        leading: Some(lf),
    }
}

/// `l_0(t), ..., l_n(t)` with `l_{k+1} = log l_k`, or a domain error
/// unless `l_n(t) > 1`.
pub fn log_tower(n: usize, t: f64) -> Result<Vec<f64>, OscError> {
    let mut ls = Vec::with_capacity(n + 1);
    let mut l = t;
    for k in 0..=n {
        if k > 0 {
            l = l.ln();
        }
        if !(l > 1.0) {
            return Err(OscError::Domain { n, t });
        }
        ls.push(l);
    }
    Ok(ls)
}

/// Smallest `t` with `l_n(t) > 1`, namely `exp^n(1)`.
pub fn tower_threshold(n: usize) -> f64 {
    (0..n).fold(1.0, |t: f64, _| t.exp())
}

/// `omega_n(t) = sum_{k <= n} gamma_k(t)^2`, `gamma_k = 1/(l_0 ... l_k)`.
pub fn omega_tower_eval(n: usize, t: f64) -> Result<f64, OscError> {
    let ls = log_tower(n, t)?;
    let mut prod = 1.0;
    let mut sum = 0.0;
    for l in ls {
        prod *= l;
        sum += (prod * prod).recip();
    }
    Ok(sum)
}

/// `q(t) - omega_n(t)/4` on the grid. Diagnostic only: positivity on a
/// finite grid decides nothing.
pub fn criterion_margin(q: &RatFun, n: usize, grid: &[f64]) -> Result<Vec<f64>, OscError> {
    if q.is_zero() {
        return Err(OscError::ZeroPotential);
    }
    let f = F64Fn::new(q);
    grid.iter()
        .map(|&t| {
            let exact = Rat::from_float(t).ok_or(OscError::Pole(t))?;
            if q.den().eval(&exact).is_zero() {
                return Err(OscError::Pole(t));
            }
            Ok(f.eval(t) - omega_tower_eval(n, t)? / 4.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_ratfun, Poly};
    use proptest::prelude::*;
    use std::f64::consts::E;

    fn p(s: &str) -> RatFun {
        parse_ratfun(s).unwrap()
    }

    #[test]
    fn classifier_table() {
        let osc = Verdict::Oscillates;
        let non = Verdict::NonOscillating;
        for (s, v, r) in [
            ("1", osc, Rule::SupercriticalPower),
            ("-x", non, Rule::SubcriticalOrNegative),
            ("1/(4*x^2)", non, Rule::SubcriticalOrNegative),
            ("1/(2*x^2)", osc, Rule::CriticalCoefficient),
            ("x", osc, Rule::SupercriticalPower),
            ("1/x^3", non, Rule::SubcriticalOrNegative),
            ("1/x", osc, Rule::SupercriticalPower),
            ("0", non, Rule::SubcriticalOrNegative),
        ] {
            let got = classify(&p(s));
            assert_eq!((got.verdict, got.rule), (v, r), "{s}");
        }
        assert!(classify(&RatFun::zero()).leading.is_none());
    }

    #[test]
    fn json_shape() {
        let v = classify(&p("1/(2*x^2)"));
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(
            s,
            r#"{"verdict":"Oscillates","rule":"CriticalCoefficient","c":"1/2","k":-2}"#
        );
        let back: OscVerdict = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        let z = serde_json::to_string(&classify(&RatFun::zero())).unwrap();
        assert_eq!(z, r#"{"verdict":"NonOscillating","rule":"SubcriticalOrNegative"}"#);
    }

    #[test]
    fn omega_values() {
        assert_eq!(omega_tower_eval(0, 2.0).unwrap(), 0.25);
        assert!((omega_tower_eval(0, 10.0).unwrap() - 0.01).abs() < 1e-18);
        let w = omega_tower_eval(1, E * E).unwrap();
        assert!((w - (-4.0f64).exp() * 1.25).abs() < 1e-15);
        assert!(omega_tower_eval(1, 2.0).is_err());
        assert!(omega_tower_eval(0, 1.0).is_err());
        assert_eq!(tower_threshold(2), E.exp());
    }

    #[test]
    fn margins() {
        // depth 3 needs t > exp(exp(e)) ~ 3.8e6
        assert!(matches!(criterion_margin(&RatFun::one(), 3, &[10.0]), Err(OscError::Domain { .. })));
        let m = criterion_margin(&RatFun::one(), 3, &[1e7]).unwrap();
        assert!(m[0] > 0.99);
        let m = criterion_margin(&p("1/(4*x^2)"), 0, &[1.5, 3.0, 70.0]).unwrap();
        assert!(m.iter().all(|v| v.abs() < 1e-16));
        let m = criterion_margin(&p("1/(2*x^2)"), 1, &[E * E]).unwrap();
        assert!(m[0] > 0.0);
        assert_eq!(criterion_margin(&p("1/(x-3)"), 0, &[3.0]), Err(OscError::Pole(3.0)));
    }

    fn rf() -> impl Strategy<Value = RatFun> {
        (
            prop::collection::vec(-5i64..=5, 1..5),
            prop::collection::vec(-5i64..=5, 1..5),
        )
            .prop_filter("nonzero", |(n, d)| {
                n.iter().any(|&v| v != 0) && d.iter().any(|&v| v != 0)
            })
            .prop_map(|(n, d)| RatFun::new(Poly::from_ints(&n), Poly::from_ints(&d)).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn shift_invariant(q in rf(), d in -6i64..6) {
            prop_assert_eq!(classify(&q), classify(&q.shift(&rat::int(d))));
        }

        #[test]
        fn sturm_monotone(q1 in rf(), delta in rf()) {
            // q2 >= q1 eventually iff the leading coefficient of q2 - q1 is >= 0
            let delta = if delta.leading_form().unwrap().c.is_negative() { -delta } else { delta };
            let q2 = &q1 + &delta;
            if classify(&q1).oscillates() {
                prop_assert!(classify(&q2).oscillates());
            }
        }

        #[test]
        fn omega_monotone(n in 0usize..3, a in 0.0f64..50.0, b in 0.0f64..50.0) {
            let t0 = tower_threshold(n) + 0.5;
            let (lo, hi) = (t0 + a.min(b), t0 + a.max(b) + 1e-3);
            prop_assert!(omega_tower_eval(n, lo).unwrap() > omega_tower_eval(n, hi).unwrap());
            if hi > tower_threshold(n + 1) {
                prop_assert!(omega_tower_eval(n + 1, hi).unwrap() > omega_tower_eval(n, hi).unwrap());
            }
        }
    }
}
