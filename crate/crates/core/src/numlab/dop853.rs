//! Dormand-Prince 8(5,3) with a per-step ceiling.

pub const DIM: usize = 5;
pub type State = [f64; DIM];

const C: [f64; 12] = [
    0.0,
    0.526001519587677318785587544488e-1,
    0.789002279381515978178381316732e-1,
    0.118350341907227396726757197510,
    0.281649658092772603273242802490,
    0.333333333333333333333333333333,
    0.25,
    0.307692307692307692307692307692,
    0.651282051282051282051282051282,
    0.6,
    0.857142857142857142857142857142,
    1.0,
];

const A2: [f64; 1] = [5.26001519587677318785587544488e-2];
const A3: [f64; 2] = [1.97250569845378994544595329183e-2, 5.91751709536136983633785987549e-2];
const A4: [f64; 3] = [2.95875854768068491816892993775e-2, 0.0, 8.87627564304205475450678981324e-2];
const A5: [f64; 4] = [
    2.41365134159266685502369798665e-1,
    0.0,
    -8.84549479328286085344864962717e-1,
    9.24834003261792003115737966543e-1,
];
const A6: [f64; 5] = [
    3.7037037037037037037037037037e-2,
    0.0,
    0.0,
    1.70828608729473871279604482173e-1,
    1.25467687566822425016691814123e-1,
];
const A7: [f64; 6] = [
    3.7109375e-2,
    0.0,
    0.0,
    1.70252211019544039314978060272e-1,
    6.02165389804559606850219397283e-2,
    -1.7578125e-2,
];
const A8: [f64; 7] = [
    3.70920001185047927108779319836e-2,
    0.0,
    0.0,
    1.70383925712239993810214054705e-1,
    1.07262030446373284651809199168e-1,
    -1.53194377486244017527936158236e-2,
    8.27378916381402288758473766002e-3,
];
const A9: [f64; 8] = [
    6.24110958716075717114429577812e-1,
    0.0,
    0.0,
    -3.36089262944694129406857109825,
    -8.68219346841726006818189891453e-1,
    2.75920996994467083049415600797e1,
    2.01540675504778934086186788979e1,
    -4.34898841810699588477366255144e1,
];
const A10: [f64; 9] = [
    4.77662536438264365890433908527e-1,
    0.0,
    0.0,
    -2.48811461997166764192642586468,
    -5.90290826836842996371446475743e-1,
    2.12300514481811942347288949897e1,
    1.52792336328824235832596922938e1,
    -3.32882109689848629194453265587e1,
    -2.03312017085086261358222928593e-2,
];
const A11: [f64; 10] = [
    -9.3714243008598732571704021658e-1,
    0.0,
    0.0,
    5.18637242884406370830023853209,
    1.09143734899672957818500254654,
    -8.14978701074692612513997267357,
    -1.85200656599969598641566180701e1,
    2.27394870993505042818970056734e1,
    2.49360555267965238987089396762,
    -3.0467644718982195003823669022,
];
const A12: [f64; 11] = [
    2.27331014751653820792359768449,
    0.0,
    0.0,
    -1.05344954667372501984066689879e1,
    -2.00087205822486249909675718444,
    -1.79589318631187989172765950534e1,
    2.79488845294199600508499808837e1,
    -2.85899827713502369474065508674,
    -8.87285693353062954433549289258,
    1.23605671757943030647266201528e1,
    6.43392746015763530355970484046e-1,
];

const B: [f64; 12] = [
    5.42937341165687622380535766363e-2,
    0.0,
    0.0,
    0.0,
    0.0,
    4.45031289275240888144113950566,
    1.89151789931450038304281599044,
    -5.8012039600105847814672114227,
    3.1116436695781989440891606237e-1,
    -1.52160949662516078556178806805e-1,
    2.01365400804030348374776537501e-1,
    4.47106157277725905176885569043e-2,
];

/// 5th-order error weights.
const E5: [f64; 12] = [
    0.1312004499419488073250102996e-1,
    0.0,
    0.0,
    0.0,
    0.0,
    -0.1225156446376204440720569753e1,
    -0.4957589496572501915214079952,
    0.1664377182454986536961530415e1,
    -0.3503288487499736816886487290,
    0.3341791187130174790297318841,
    0.8192320648511571246570742613e-1,
    -0.2235530786388629525884427845e-1,
];

/// 3rd-order error weights on `k1, k9, k12`.
const BHH: [f64; 3] = [
    0.244094488188976377952755905512,
    0.733846688281611857341361741547,
    0.220588235294117647058823529412e-1,
];

pub trait Rhs {
    fn eval(&self, t: f64, y: &State) -> State;
    /// Upper bound for a step starting at `t`.
    fn step_ceiling(&self, t: f64) -> f64;
}

/// Result of one step.
pub struct Step {
    pub y: State,
    /// Derivative at the new point.
    pub k: State,
    err5: State,
    err3: State,
}

impl Step {
    /// Hairer's combined error norm; `<= 1` means accept.
    pub fn error(&self, y0: &State, h: f64, tol: f64) -> f64 {
        let (mut e5, mut e3) = (0.0, 0.0);
        for i in 0..DIM {
            let sk = tol + tol * y0[i].abs().max(self.y[i].abs());
            e5 += (self.err5[i] / sk).powi(2);
            e3 += (self.err3[i] / sk).powi(2);
        }
        let deno = e5 + 0.01 * e3;
        let deno = if deno > 0.0 { deno } else { 1.0 };
        h.abs() * e5 * (1.0 / (DIM as f64 * deno)).sqrt()
    }
}

pub fn step<F: Rhs + ?Sized>(f: &F, t: f64, y: &State, k1: &State, h: f64) -> Step {
    const ROWS: [&[f64]; 11] = [&A2, &A3, &A4, &A5, &A6, &A7, &A8, &A9, &A10, &A11, &A12];
    let mut k = [[0.0; DIM]; 12];
    k[0] = *k1;
    for (s, row) in ROWS.iter().enumerate() {
        let mut arg = *y;
        for i in 0..DIM {
            let mut acc = 0.0;
            for (j, a) in row.iter().enumerate() {
                acc += a * k[j][i];
            }
            arg[i] += h * acc;
        }
        k[s + 1] = f.eval(t + C[s + 1] * h, &arg);
    }
    let mut out = *y;
    let mut err5 = [0.0; DIM];
    let mut err3 = [0.0; DIM];
    for i in 0..DIM {
        let (mut sb, mut se) = (0.0, 0.0);
        for s in 0..12 {
            sb += B[s] * k[s][i];
            se += E5[s] * k[s][i];
        }
        out[i] += h * sb;
        err5[i] = se;
        err3[i] = sb - BHH[0] * k[0][i] - BHH[1] * k[8][i] - BHH[2] * k[11][i];
    }
    let kn = f.eval(t + h, &out);
    Step { y: out, k: kn, err5, err3 }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepFailure {
    Underflow { t: f64 },
    NonFinite { t: f64 },
}

/// Integrates from `t0` to `t1`, calling `accept(t, y)` after every
/// accepted step (including the initial point). `accept` may abort by
/// returning an error.
pub fn integrate<F, E>(
    f: &F,
    t0: f64,
    y0: State,
    t1: f64,
    tol: f64,
    mut accept: impl FnMut(f64, &State) -> Result<(), E>,
) -> Result<(), E>
where
    F: Rhs + ?Sized,
    E: From<StepFailure>,
{
    const SAFETY: f64 = 0.9;
    const FACMIN: f64 = 0.333;
    const FACMAX: f64 = 6.0;
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f.eval(t, &y);
    accept(t, &y)?;
    let mut h = 0.1 * f.step_ceiling(t).min(t1 - t0);
    while t < t1 {
        h = h.min(f.step_ceiling(t)).min(t1 - t);
        let tiny = 1e-14 * t.abs().max(1.0);
        if h <= tiny {
            return Err(StepFailure::Underflow { t }.into());
        }
        let st = step(f, t, &y, &k1, h);
        let err = st.error(&y, h, tol);
        if !err.is_finite() {
            if h <= 10.0 * tiny {
                return Err(StepFailure::NonFinite { t }.into());
            }
            h *= 0.2;
            continue;
        }
        let fac = if err == 0.0 { FACMAX } else { SAFETY * err.powf(-0.125) };
        if err <= 1.0 {
            // land exactly on t1 despite rounding
            t = if t1 - (t + h) <= 1e-15 * t1.abs() { t1 } else { t + h };
            y = st.y;
            k1 = st.k;
            accept(t, &y)?;
            h *= fac.clamp(FACMIN, FACMAX);
        } else {
            h *= fac.clamp(FACMIN, 1.0);
        }
    }
    Ok(())
}
