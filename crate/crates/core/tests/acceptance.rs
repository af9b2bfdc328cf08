//! Acceptance suite: one line per criterion, `PASS` or `FAIL` with the
//! measured quantity. Exits non-zero if a criterion outside `UNATTAINABLE`
//! fails.

use std::f64::consts::{E, PI};
use std::time::{Duration, Instant};

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

use oscphase::diffops::{canonical_potential, Equation};
use oscphase::exactalg::rat::{int, rat};
use oscphase::exactalg::{parse_ratfun, QuadExt, Rat, RatFun};
use oscphase::numlab::{integrate, interlace, trench_amplitude, verify, NumTrace, Predictions, VerifyOptions};
use oscphase::oscillate::classify;
use oscphase::phaseseries::{sigma_coefficient_identities, solve_z_from_potential, z_to_phase};
use oscphase::zerodist::zero_model;

/// `[2, 1e4]` holds three zeros of the Chebyshev solution, so only two
/// consecutive differences exist where twenty are asked for.
const UNATTAINABLE: &[u32] = &[4];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn q(s: &str) -> RatFun {
    parse_ratfun(s).unwrap()
}

fn canonical(s: &str) -> Equation {
    Equation::canonical(q(s))
}

fn zeros(eq: &Equation, w: (f64, f64)) -> Vec<f64> {
    integrate(eq, w.0, w.1, 1e-10).unwrap().first.checked_zeros().unwrap()
}

fn rational(r: Rat, m: &Rat) -> QuadExt {
    QuadExt::rational(r, m)
}

fn c1_coulomb_phase() -> Outcome {
    let mut worst = String::new();
    let mut ok = true;
    for (eta, l) in [(int(1), 0i64), (int(2), 1), (rat(1, 2), 3)] {
        let ll = int(l * (l + 1));
        let pot = q(&format!("1 - 2*({eta})/x - {ll}/x^2"));
        let ph = z_to_phase(&solve_z_from_potential(&pot, 4).unwrap());
        let m = &ph.radicand;
        let s = &ll + &eta * &eta;
        let want = [
            (ph.linear.clone(), rational(int(1), m)),
            (ph.logcoeff.clone(), rational(-eta.clone(), m)),
            (ph.tail_coeff(1), rational(&s / int(2), m)),
            (ph.tail_coeff(2), rational(&eta / int(4) * (&s - int(1)), m)),
        ];
        for (k, (got, exp)) in want.iter().enumerate() {
            if got != exp {
                ok = false;
                worst = format!("eta={eta}, l={l}, term {k}: {got} != {exp}");
            }
        }
    }
    outcome(ok, if ok { "exact match for (1,0), (2,1), (1/2,3)".into() } else { worst })
}

/// Polynomials in `t = 1/x`, truncated after `t^4`.
type Trunc = Vec<Rat>;

fn tmul(a: &Trunc, b: &Trunc) -> Trunc {
    let mut out = vec![int(0); 5];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j < 5 {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// `d/dx = -t^2 d/dt`.
fn tdx(a: &Trunc) -> Trunc {
    let mut out = vec![int(0); 5];
    for (i, x) in a.iter().enumerate().skip(1) {
        if i + 1 < 5 {
            out[i + 1] = -(x * int(i as i64));
        }
    }
    out
}

/// `sigma(z) = (2 z z'' - 3 z'^2 + z^4) / z^2` through `t^4`.
fn sigma_in_inverse_powers(z: &[Rat; 5]) -> Trunc {
    let z: Trunc = z.to_vec();
    let d1 = tdx(&z);
    let d2 = tdx(&d1);
    let z2 = tmul(&z, &z);
    let num: Trunc = (0..5)
        .map(|i| int(2) * &tmul(&z, &d2)[i] - int(3) * &tmul(&d1, &d1)[i] + &tmul(&z2, &z2)[i])
        .collect();
    // long division by z^2
    let mut q = vec![int(0); 5];
    for i in 0..5 {
        let mut r = num[i].clone();
        for j in 0..i {
            r -= &q[j] * &z2[i - j];
        }
        q[i] = r / &z2[0];
    }
    q
}

fn c2_sigma_identities() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let r = (-30i64..=30, 1i64..=12).prop_map(|(n, d)| rat(n, d));
    let nz = r.clone().prop_filter("nonzero", |v| *v != int(0));
    let strat = (nz, r.clone(), r.clone(), r.clone(), r);
    for case in 0..100 {
        let (z0, z1, z2, z3, z4) = strat.new_tree(&mut runner).unwrap().current();
        let zs = [z0, z1, z2, z3, z4];
        let sig = sigma_in_inverse_powers(&zs);
        let want = sigma_coefficient_identities(&zs);
        for (j, w) in want.iter().enumerate() {
            if &sig[j] != w {
                return outcome(false, format!("case {case}, coefficient {j}"));
            }
        }
    }
    outcome(true, "100 random substitutions, all five identities exact")
}

fn c3_chebyshev_reduction() -> Outcome {
    for alpha in [1i64, 2, -1] {
        let eq = Equation::new(q("x/(x^2-1)"), q(&format!("({alpha})/(x^2-1)")));
        let got = canonical_potential(&eq).q;
        let want = q(&format!("(({alpha} + 1/4)*x^2 - ({alpha}) + 1/2)/(x^2-1)^2"));
        if got != want {
            return outcome(false, format!("alpha={alpha}: {got}"));
        }
    }
    outcome(true, "exact for alpha = 1, 2, -1")
}

fn arcosh_steps(w: (f64, f64)) -> (usize, Vec<f64>) {
    let eq = Equation::new(q("x/(x^2-1)"), q("1/(x^2-1)"));
    let z = zeros(&eq, w);
    let diffs: Vec<f64> = z.windows(2).map(|w| w[1].acosh() - w[0].acosh()).collect();
    (z.len(), diffs[diffs.len().saturating_sub(20)..].to_vec())
}

fn c4_chebyshev_phase() -> Outcome {
    let max_dev = |d: &[f64]| d.iter().map(|d| (d - PI).abs()).fold(0.0, f64::max);
    let (n, tail) = arcosh_steps((2.0, 1e4));
    let dev = max_dev(&tail);
    // the same law on a window long enough to hold 20 differences
    let (n_long, tail_long) = arcosh_steps((2.0, 1e30));
    outcome(
        tail.len() == 20 && dev < 1e-6,
        format!(
            "[2, 1e4]: {n} zeros, {} differences (need 20), max |d - pi| = {dev:.2e}; \
             [2, 1e30]: {n_long} zeros, last {} differences max |d - pi| = {:.2e}",
            tail.len(),
            tail_long.len(),
            max_dev(&tail_long)
        ),
    )
}

fn c5_power_law() -> Outcome {
    // zerodist's model supplies the law; the index offset comes from the first zero
    let eq = canonical("x");
    let model = zero_model(&eq.b).unwrap();
    let z = zeros(&eq, (1.0, 3000.0));
    let n0 = model.index_of(z[0]);
    let law = |n: f64| (1.5 * PI * n).powf(2.0 / 3.0);
    let start = z.len() - 30;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (j, s) in z.iter().enumerate().skip(start) {
        let n = (n0 + j as i64) as f64;
        assert_eq!(model.predict(n), law(n));
        let r = s / law(n);
        lo = lo.min(r);
        hi = hi.max(r);
    }
    outcome(
        lo >= 0.99 && hi <= 1.01,
        format!("{} zeros, n0 = {n0}, last 30 ratios in [{lo:.8}, {hi:.8}]", z.len()),
    )
}

fn c6_cauchy_euler() -> Outcome {
    let z = zeros(&canonical("1/(2*x^2)"), (1.0, 1e12));
    let limit = (2.0 * PI).exp();
    let devs: Vec<f64> = z.windows(2).filter(|w| w[0] > 10.0).map(|w| (w[1] / w[0] - limit).abs()).collect();
    let dev = devs.iter().copied().fold(0.0, f64::max);
    outcome(
        !devs.is_empty() && dev < 1e-3,
        format!("{} pairs with s_n > 10, max |ratio - e^(2 pi)| = {dev:.2e}", devs.len()),
    )
}

fn trench_residual(eq: &Equation, w: (f64, f64)) -> f64 {
    let pair = integrate(eq, w.0, w.1, 1e-10).unwrap();
    let v = trench_amplitude(&pair).unwrap();
    let res = |y: &NumTrace| {
        y.extract_critical_points()
            .unwrap()
            .into_iter()
            .map(|t| (y.value_at(t).0.abs() - v.eval(t)).abs() / v.eval(t))
            .fold(0.0, f64::max)
    };
    res(&pair.first).max(res(&pair.second))
}

fn c7_trench() -> Outcome {
    let cases = [("1", (1.0, 2000.0)), ("x", (1.0, 2000.0)), ("1 - 2/x", (20.0, 2000.0))];
    let res: Vec<f64> = cases.iter().map(|(s, w)| trench_residual(&canonical(s), *w)).collect();
    let worst = res.iter().copied().fold(0.0, f64::max);
    outcome(
        worst < 1e-6,
        format!("max residual q=1: {:.1e}, q=x: {:.1e}, Coulomb: {:.1e}", res[0], res[1], res[2]),
    )
}

fn amplitudes(eq: &Equation, w: (f64, f64)) -> Vec<f64> {
    let pair = integrate(eq, w.0, w.1, 1e-10).unwrap();
    let y = &pair.first;
    // T0 itself is a critical point of y1
    y.extract_critical_points()
        .unwrap()
        .into_iter()
        .filter(|&t| t > w.0)
        .map(|t| y.value_at(t).0.abs())
        .collect()
}

fn c8_sonin_polya() -> Outcome {
    let dec = amplitudes(&canonical("x"), (1.0, 2000.0));
    let inc = amplitudes(&canonical("1 + 1/x"), (10.0, 500.0));
    let ok_dec = dec.windows(2).all(|w| w[1] < w[0]);
    let ok_inc = inc.windows(2).all(|w| w[1] > w[0]);
    outcome(
        ok_dec && ok_inc && dec.len() > 2 && inc.len() > 2,
        format!(
            "q=x: {} critical points, decreasing {ok_dec}; q=1+1/x: {} critical points, increasing {ok_inc}",
            dec.len(),
            inc.len()
        ),
    )
}

fn c9_sturm_separation() -> Outcome {
    let mut runner = TestRunner::deterministic();
    // (c x^2 + d x + e)/(x^2 + f), c > 0, f > 0: oscillating, pole-free on R
    let coef = |lo: i64, hi: i64| (lo..=hi, 1i64..=4).prop_map(|(n, d)| rat(n, d));
    let strat = (coef(1, 12), coef(-6, 6), coef(-6, 6), coef(1, 6));
    let mut counts = Vec::new();
    for case in 0..10 {
        let (c, d, e, f) = strat.new_tree(&mut runner).unwrap().current();
        let s = format!("(({c})*x^2 + ({d})*x + ({e}))/(x^2 + ({f}))");
        let eq = canonical(&s);
        if !classify(&eq.b).oscillates() {
            return outcome(false, format!("case {case}: {s} classified non-oscillating"));
        }
        let pair = integrate(&eq, 1.0, 100.0, 1e-10).unwrap();
        let z1 = pair.first.checked_zeros().unwrap();
        let z2 = pair.second.checked_zeros().unwrap();
        if !interlace(&z1, &z2) {
            return outcome(false, format!("case {case}: {s} zeros do not interlace"));
        }
        counts.push(z1.len());
    }
    outcome(true, format!("10 random potentials, zero counts {counts:?}"))
}

fn c10_counting() -> Outcome {
    let t = 2000.0;
    let z = zeros(&canonical("x"), (1.0, t));
    let n = z.iter().filter(|&&s| s >= E).count() as f64;
    let est = 2.0 / (3.0 * PI) * (t.powf(1.5) - E.powf(1.5));
    let rel = (n - est).abs() / n;
    outcome(rel < 0.02, format!("N(2000) = {n}, estimate {est:.3}, relative error {rel:.2e}"))
}

fn behaviour(eq: &Equation, w: (f64, f64)) -> (usize, usize) {
    let z = zeros(eq, w);
    let mid = (w.0 * w.1).sqrt();
    (z.iter().filter(|&&s| s <= mid).count(), z.len())
}

fn c11_classifier() -> Outcome {
    let cheb = |alpha: i64| canonical_potential(&Equation::new(q("x/(x^2-1)"), q(&format!("({alpha})/(x^2-1)")))).q;
    let cases: Vec<(&str, RatFun, bool, (f64, f64))> = vec![
        ("1", q("1"), true, (1.0, 2000.0)),
        ("-x", q("-x"), false, (1.0, 50.0)),
        ("1/(4x^2)", q("1/(4*x^2)"), false, (1.0, 1e12)),
        ("1/(2x^2)", q("1/(2*x^2)"), true, (1.0, 1e12)),
        ("x", q("x"), true, (1.0, 2000.0)),
        ("f_1", cheb(1), true, (2.0, 1e8)),
        ("f_-1", cheb(-1), false, (2.0, 1e8)),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, pot, expected, w) in cases {
        let verdict = classify(&pot).oscillates();
        let (half, full) = behaviour(&Equation::canonical(pot), w);
        let numeric = full >= 3 && full > half;
        ok &= verdict == expected && numeric == expected;
        parts.push(format!("{name}: {} ({half}->{full})", if verdict { "osc" } else { "non" }));
    }
    outcome(ok, parts.join(", "))
}

fn c12_calibrated() -> Outcome {
    let eq = canonical("1 - 2/x");
    let pr = Predictions::for_potential(&eq.b, 4);
    let r = verify(&eq, &pr, (20.0, 2000.0), &VerifyOptions { tol: 1e-10, report_last: 50 }).unwrap();
    let c = r.checks.iter().find(|c| c.name == "phase_calibrated").unwrap();
    let err = c.value.unwrap_or(f64::INFINITY);
    outcome(err < 1e-2, format!("{} zeros, max |s_hat_n - s_n| over the last 50 = {err:.2e}", r.zeros.len()))
}

type Criterion = (u32, &'static str, fn() -> Outcome, Option<Duration>);

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "Coulomb phase coefficients", c1_coulomb_phase, Some(Duration::from_secs(1))),
        (2, "sigma matching identities", c2_sigma_identities, Some(Duration::from_secs(1))),
        (3, "Chebyshev reduction", c3_chebyshev_reduction, None),
        (4, "Chebyshev arcosh phase", c4_chebyshev_phase, Some(Duration::from_secs(10))),
        (5, "power-law zeros", c5_power_law, Some(Duration::from_secs(10))),
        (6, "Cauchy-Euler ratios", c6_cauchy_euler, None),
        (7, "Trench identity", c7_trench, None),
        (8, "Sonin-Polya monotonicity", c8_sonin_polya, None),
        (9, "Sturm separation", c9_sturm_separation, None),
        (10, "counting function", c10_counting, None),
        (11, "classifier table", c11_classifier, None),
        (12, "phase-calibrated zeros", c12_calibrated, None),
    ];
    let mut unexpected = Vec::new();
    let mut passed = 0;
    for (id, name, run, limit) in criteria {
        let start = Instant::now();
        let mut o = run();
        let took = start.elapsed();
        if let Some(l) = limit {
            if took > l {
                o.pass = false;
                o.detail = format!("{}; exceeded {l:?}", o.detail);
            }
        }
        let mark = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {mark} {name} [{took:.2?}]: {}", o.detail);
        if o.pass {
            passed += 1;
        } else if !UNATTAINABLE.contains(&id) {
            unexpected.push(id);
        }
    }
    println!("acceptance: {passed}/12 passed");
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
