use std::f64::consts::PI;
use std::sync::Arc;

use super::dop853::{self, Rhs, State, StepFailure};
use super::NumError;
use crate::diffops::{canonical_potential, Equation};
use crate::exactalg::{F64Fn, Rat, RatFun};

/// `y'' = -a y' - b y` for two solutions at once, plus `L' = -a` so that
/// the Wronskian is `w(T0) e^L`.
#[derive(Clone, Debug)]
pub struct System {
    a: F64Fn,
    b: F64Fn,
    a_zero: bool,
}

impl System {
    pub fn new(eq: &Equation) -> Self {
        System {
            a: F64Fn::new(&eq.a),
            b: F64Fn::new(&eq.b),
            a_zero: eq.a.is_zero(),
        }
    }

    fn coeffs(&self, t: f64) -> (f64, f64) {
        let a = if self.a_zero { 0.0 } else { self.a.eval(t) };
        (a, self.b.eval(t))
    }

    /// Frequency scale `lambda = max(sqrt|b|, 1/(1 + |t|))` of the
    /// Prüfer angle.
    pub fn prufer_scale(&self, t: f64) -> f64 {
        self.b.eval(t).abs().sqrt().max((1.0 + t.abs()).recip())
    }
}

impl Rhs for System {
    fn eval(&self, t: f64, s: &State) -> State {
        let (a, b) = self.coeffs(t);
        [s[1], -a * s[1] - b * s[0], s[3], -a * s[3] - b * s[2], -a]
    }

    /// `0.1` over the local frequency `sqrt|b|`, the damping `|a|`, or the
    /// natural scale `1 + |t|`, whichever is largest.
    fn step_ceiling(&self, t: f64) -> f64 {
        let (a, b) = self.coeffs(t);
        0.1 / b.abs().sqrt().max(a.abs()).max((1.0 + t.abs()).recip())
    }
}

/// Accepted steps of one integration, shared by the traces cut from it.
#[derive(Debug)]
pub struct Integration {
    system: System,
    t: Vec<f64>,
    s: Vec<State>,
    w0: f64,
    tol: f64,
    max_drift: f64,
    canonical: bool,
    q_nonvanishing: bool,
}

fn wronskian(s: &State) -> f64 {
    s[0] * s[3] - s[1] * s[2]
}

/// Relative Wronskian error scaled by `|y1 y2'| + |y1' y2|`, the size of
/// the terms whose difference forms `w`.
fn drift(s: &State, w0: f64) -> f64 {
    let expected = w0 * s[4].exp();
    let scale = (s[0] * s[3]).abs() + (s[1] * s[2]).abs();
    (wronskian(s) - expected).abs() / scale.max(expected.abs())
}

impl Integration {
    pub fn grid(&self) -> &[f64] {
        &self.t
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn max_drift(&self) -> f64 {
        self.max_drift
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn window(&self) -> (f64, f64) {
        (self.t[0], *self.t.last().unwrap())
    }

    pub fn node(&self, i: usize) -> &State {
        &self.s[i]
    }

    /// Full state at `t`, by one step of the integrator from the last
    /// node at or before `t`. The step is no longer than the accepted one.
    pub fn state_at(&self, t: f64) -> State {
        let i = self.t.partition_point(|&x| x <= t).saturating_sub(1);
        let h = t - self.t[i];
        if h == 0.0 {
            return self.s[i];
        }
        let k1 = self.system.eval(self.t[i], &self.s[i]);
        dop853::step(&self.system, self.t[i], &self.s[i], &k1, h).y
    }

    pub fn wronskian_at(&self, t: f64) -> f64 {
        self.w0 * self.state_at(t)[4].exp()
    }

    fn second_derivative(&self, t: f64, y: f64, yp: f64) -> f64 {
        let (a, b) = self.system.coeffs(t);
        -a * yp - b * y
    }
}

/// A solution `c0 y1 + c1 y2` read off a shared integration, with its
/// unwrapped Prüfer angle `theta = atan2(lambda y, y')` at every node
/// (`lambda` from [`System::prufer_scale`]). Zeros of `y` are exactly the
/// points where `theta` is in `pi Z`, and `theta` crosses them upward.
#[derive(Clone, Debug)]
pub struct NumTrace {
    sol: Arc<Integration>,
    coef: [f64; 2],
    theta: Vec<f64>,
}

/// Representative of `d` mod `2 pi` in `(-pi, pi]`.
fn wrap(d: f64) -> f64 {
    let r = (d + PI).rem_euclid(2.0 * PI) - PI;
    if r == -PI { PI } else { r }
}

impl NumTrace {
    pub fn new(sol: Arc<Integration>, coef: [f64; 2]) -> Self {
        let mut theta = Vec::with_capacity(sol.len());
        let mut prev = 0.0;
        for i in 0..sol.len() {
            let s = &sol.s[i];
            let lambda = sol.system.prufer_scale(sol.t[i]);
            let raw = (lambda * (coef[0] * s[0] + coef[1] * s[2])).atan2(coef[0] * s[1] + coef[1] * s[3]);
            let th = if i == 0 { raw } else { prev + wrap(raw - wrap(prev)) };
            theta.push(th);
            prev = th;
        }
        NumTrace { sol, coef, theta }
    }

    pub fn integration(&self) -> &Arc<Integration> {
        &self.sol
    }

    pub fn grid(&self) -> &[f64] {
        &self.sol.t
    }

    pub fn y(&self, i: usize) -> f64 {
        let s = &self.sol.s[i];
        self.coef[0] * s[0] + self.coef[1] * s[2]
    }

    pub fn yp(&self, i: usize) -> f64 {
        let s = &self.sol.s[i];
        self.coef[0] * s[1] + self.coef[1] * s[3]
    }

    pub fn prufer_theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn prufer_rho(&self, i: usize) -> f64 {
        (self.sol.system.prufer_scale(self.sol.t[i]) * self.y(i)).hypot(self.yp(i))
    }

    /// `(y(t), y'(t))`.
    pub fn value_at(&self, t: f64) -> (f64, f64) {
        let s = self.sol.state_at(t);
        (
            self.coef[0] * s[0] + self.coef[1] * s[2],
            self.coef[0] * s[1] + self.coef[1] * s[3],
        )
    }

    pub fn theta_at(&self, t: f64) -> f64 {
        let i = self.sol.t.partition_point(|&x| x <= t).saturating_sub(1);
        let (y, yp) = self.value_at(t);
        let lambda = self.sol.system.prufer_scale(t);
        self.theta[i] + wrap((lambda * y).atan2(yp) - wrap(self.theta[i]))
    }

    fn scan(
        &self,
        node: impl Fn(usize) -> f64,
        at: impl Fn(f64) -> (f64, f64),
    ) -> Vec<f64> {
        let n = self.sol.len();
        let mut out = Vec::new();
        for i in 0..n {
            let v = node(i);
            if v == 0.0 {
                out.push(self.sol.t[i]);
                continue;
            }
            if i + 1 < n {
                let w = node(i + 1);
                if w != 0.0 && (v < 0.0) != (w < 0.0) {
                    out.push(refine(&at, self.sol.t[i], self.sol.t[i + 1], v));
                }
            }
        }
        out
    }

    /// Zeros of `y`: exact node zeros and refined sign changes.
    pub fn extract_zeros(&self) -> Vec<f64> {
        self.scan(|i| self.y(i), |t| self.value_at(t))
    }

    /// Number of zeros on the window counted from the Prüfer angle, which
    /// crosses each multiple of `pi` exactly once, upward.
    pub fn prufer_zero_count(&self) -> usize {
        let th0 = self.theta[0];
        let th1 = *self.theta.last().unwrap();
        let k = (th1 / PI).floor() - (th0 / PI).ceil() + 1.0;
        k.max(0.0) as usize
    }

    /// Zeros cross-checked against the Prüfer count.
    pub fn checked_zeros(&self) -> Result<Vec<f64>, NumError> {
        let z = self.extract_zeros();
        let p = self.prufer_zero_count();
        if z.len() != p {
            return Err(NumError::ZeroCountMismatch { raw: z.len(), prufer: p });
        }
        Ok(z)
    }

    /// Zeros of `y'`. When the equation is canonical and `q` has no zero on
    /// the window, each interval between consecutive zeros of `y` must
    /// contain exactly one.
    pub fn extract_critical_points(&self) -> Result<Vec<f64>, NumError> {
        let sol = &self.sol;
        let crit = self.scan(
            |i| self.yp(i),
            |t| {
                let (y, yp) = self.value_at(t);
                (yp, sol.second_derivative(t, y, yp))
            },
        );
        if sol.canonical && sol.q_nonvanishing {
            let zeros = self.extract_zeros();
            let mut j = 0;
            for w in zeros.windows(2) {
                while j < crit.len() && crit[j] <= w[0] {
                    j += 1;
                }
                let mut k = j;
                while k < crit.len() && crit[k] < w[1] {
                    k += 1;
                }
                if k - j != 1 {
                    return Err(NumError::CriticalPoints { lo: w[0], hi: w[1], count: k - j });
                }
            }
        }
        Ok(crit)
    }
}

/// Safeguarded Newton on `[lo, hi]` for `f(t) = value`, with `at(t)`
/// returning `(value, derivative)` and `f(lo)` of sign `f_lo`.
fn refine(at: &impl Fn(f64) -> (f64, f64), lo: f64, hi: f64, f_lo: f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    let neg_lo = f_lo < 0.0;
    let mut x = 0.5 * (a + b);
    for _ in 0..100 {
        let (v, d) = at(x);
        if v == 0.0 {
            return x;
        }
        if (v < 0.0) == neg_lo {
            a = x;
        } else {
            b = x;
        }
        let nx = x - v / d;
        let next = if d != 0.0 && nx > a && nx < b { nx } else { 0.5 * (a + b) };
        if (next - x).abs() <= 2.0 * f64::EPSILON * x.abs() || b - a <= 2.0 * f64::EPSILON * b.abs() {
            return next;
        }
        x = next;
    }
    x
}

/// Both fundamental solutions, `y1(T0) = 1, y1'(T0) = 0` and
/// `y2(T0) = 0, y2'(T0) = 1`, from one shared integration.
#[derive(Clone, Debug)]
pub struct TracePair {
    pub first: NumTrace,
    pub second: NumTrace,
}

impl TracePair {
    pub fn integration(&self) -> &Arc<Integration> {
        self.first.integration()
    }

    /// The solution with the given initial values at `T0`.
    pub fn combination(&self, y0: f64, yp0: f64) -> NumTrace {
        NumTrace::new(self.integration().clone(), [y0, yp0])
    }
}

fn exact(t: f64) -> Rat {
    Rat::from_float(t).expect("finite")
}

pub fn integrate(eq: &Equation, t0: f64, t1: f64, tol: f64) -> Result<TracePair, NumError> {
    if !(1e-12..=1e-6).contains(&tol) {
        return Err(NumError::ToleranceOutOfRange(tol));
    }
    if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
        return Err(NumError::InvalidWindow(t0, t1));
    }
    let (a, b) = (exact(t0), exact(t1));
    if eq.a.has_pole_in(&a, &b) || eq.b.has_pole_in(&a, &b) {
        return Err(NumError::PoleInWindow(t0, t1));
    }
    let q: RatFun = canonical_potential(eq).q;
    let system = System::new(eq);
    let mut ts = Vec::new();
    let mut ss = Vec::new();
    let mut max_drift: f64 = 0.0;
    let limit = 100.0 * tol;
    dop853::integrate(&system, t0, [1.0, 0.0, 0.0, 1.0, 0.0], t1, tol, |t, s| {
        if !s.iter().all(|v| v.is_finite()) {
            return Err(NumError::NonFinite(t));
        }
        let d = drift(s, 1.0);
        max_drift = max_drift.max(d);
        if d > limit {
            return Err(NumError::WronskianDrift { drift: d, limit, t });
        }
        ts.push(t);
        ss.push(*s);
        Ok(())
    })?;
    let sol = Arc::new(Integration {
        system,
        t: ts,
        s: ss,
        w0: 1.0,
        tol,
        max_drift,
        canonical: eq.is_canonical(),
        q_nonvanishing: !q.has_zero_in(&a, &b),
    });
    Ok(TracePair {
        first: NumTrace::new(sol.clone(), [1.0, 0.0]),
        second: NumTrace::new(sol, [0.0, 1.0]),
    })
}

impl From<StepFailure> for NumError {
    fn from(f: StepFailure) -> Self {
        match f {
            StepFailure::Underflow { t } => NumError::StepUnderflow(t),
            StepFailure::NonFinite { t } => NumError::NonFinite(t),
        }
    }
}

/// `v = |w| / sqrt(y1'^2 + y2'^2)` for the pair's two solutions; equals
/// `|y1|` at critical points of `y1` and `|y2|` at those of `y2`.
#[derive(Clone, Debug)]
pub struct TrenchAmplitude {
    sol: Arc<Integration>,
    c1: [f64; 2],
    c2: [f64; 2],
}

pub fn trench_amplitude(pair: &TracePair) -> Result<TrenchAmplitude, NumError> {
    let sol = pair.integration();
    if !sol.is_canonical() {
        return Err(NumError::NotCanonical);
    }
    Ok(TrenchAmplitude {
        sol: sol.clone(),
        c1: pair.first.coef,
        c2: pair.second.coef,
    })
}

impl TrenchAmplitude {
    fn v(&self, s: &State, w: f64) -> f64 {
        let det = self.c1[0] * self.c2[1] - self.c1[1] * self.c2[0];
        let d1 = self.c1[0] * s[1] + self.c1[1] * s[3];
        let d2 = self.c2[0] * s[1] + self.c2[1] * s[3];
        (det * w).abs() / d1.hypot(d2)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.v(&self.sol.state_at(t), self.sol.wronskian_at(t))
    }

    pub fn at_node(&self, i: usize) -> f64 {
        let s = self.sol.node(i);
        self.v(s, self.sol.w0 * s[4].exp())
    }
}
