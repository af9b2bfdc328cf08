//! Linear differential operators `a_0 + a_1 D + ... + a_n D^n` over Q(x).

use std::fmt;

use serde::{Deserialize, Serialize};

use super::diffpoly::DiffPoly;
use super::riccati::riccati_basis;
use super::DiffOpsError;
use crate::exactalg::{rat, RatFun};

/// Coefficients stored by power of `D`; the leading coefficient is nonzero
/// unless this is the zero operator. Serializes as a JSON array of
/// coefficient strings.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinOp {
    coeffs: Vec<RatFun>,
}

fn binomial(n: u64, k: u64) -> i64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1)) as i64
}

impl LinOp {
    pub fn new(mut coeffs: Vec<RatFun>) -> Self {
        while coeffs.last().is_some_and(RatFun::is_zero) {
            coeffs.pop();
        }
        LinOp { coeffs }
    }

    pub fn zero() -> Self {
        LinOp { coeffs: Vec::new() }
    }

    pub fn identity() -> Self {
        Self::mult(RatFun::one())
    }

    /// `D^n`
    pub fn d_pow(n: usize) -> Self {
        let mut c = vec![RatFun::zero(); n + 1];
        c[n] = RatFun::one();
        LinOp::new(c)
    }

    /// Multiplication by `a`.
    pub fn mult(a: RatFun) -> Self {
        LinOp::new(vec![a])
    }

    /// `D^2 + a D + b`
    pub fn monic_second_order(a: RatFun, b: RatFun) -> Self {
        LinOp::new(vec![b, a, RatFun::one()])
    }

    pub fn coeffs(&self) -> &[RatFun] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RatFun {
        self.coeffs.get(i).cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| *c == RatFun::one())
    }

    pub fn add(&self, other: &LinOp) -> LinOp {
        let n = self.coeffs.len().max(other.coeffs.len());
        LinOp::new((0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &LinOp) -> LinOp {
        self.add(&other.left_scale(&RatFun::from_int(-1)))
    }

    /// `a * A`
    pub fn left_scale(&self, a: &RatFun) -> LinOp {
        LinOp::new(self.coeffs.iter().map(|c| a * c).collect())
    }

    /// Composition `self ∘ other`, using `D^i b = sum_k C(i,k) b^(k) D^(i-k)`.
    pub fn compose(&self, other: &LinOp) -> LinOp {
        let (Some(n), Some(m)) = (self.order(), other.order()) else {
            return LinOp::zero();
        };
        let mut out = vec![RatFun::zero(); n + m + 1];
        for (j, b) in other.coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let mut ders = vec![b.clone()];
            for k in 1..=n {
                let next = ders[k - 1].derive();
                ders.push(next);
            }
            for (i, a) in self.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (k, bk) in ders.iter().enumerate().take(i + 1) {
                    let t = (a * bk).scale(&rat::int(binomial(i as u64, k as u64)));
                    out[i - k + j] = &out[i - k + j] + &t;
                }
            }
        }
        LinOp::new(out)
    }

    /// `A(y) = sum a_i y^(i)`.
    pub fn apply(&self, y: &RatFun) -> RatFun {
        let mut acc = RatFun::zero();
        let mut d = y.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                d = d.derive();
            }
            acc = &acc + &(a * &d);
        }
        acc
    }

    /// `Ri(A) = sum a_i R_i` as a differential polynomial in `Z`.
    pub fn riccati_transform(&self) -> DiffPoly {
        self.coeffs
            .iter()
            .enumerate()
            .fold(DiffPoly::zero(), |acc, (i, a)| {
                acc.add(&riccati_basis(i).scale(a))
            })
    }

    /// Twist `u^{-1} A u` given the logarithmic derivative `g = u'/u`:
    /// every `D` is replaced by `D + g`.
    pub fn twist(&self, g: &RatFun) -> LinOp {
        let shift = LinOp::new(vec![g.clone(), RatFun::one()]);
        let mut power = LinOp::identity();
        let mut acc = LinOp::zero();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                power = power.compose(&shift);
            }
            acc = acc.add(&power.left_scale(a));
        }
        acc
    }

    /// `4 A_{twist u}` for `u' / u = -a_1/2`, i.e. the self-adjoint form
    /// `4 D^2 + f` with `f = 4 a_0 - 2 a_1' - a_1^2` (4-normalization).
    pub fn four_normal_form(&self) -> Result<LinOp, DiffOpsError> {
        if self.order() != Some(2) || !self.is_monic() {
            return Err(DiffOpsError::NotMonicSecondOrder);
        }
        let g = self.coeff(1).scale(&rat::rat(-1, 2));
        Ok(self.twist(&g).left_scale(&RatFun::from_int(4)))
    }

    /// The operator `A^D` with `A^D D = D A - (a_0'/a_0) A`, whose kernel is
    /// the derivatives of the kernel of `A`.
    pub fn derivative_operator(&self) -> Result<LinOp, DiffOpsError> {
        let a0 = self.coeff(0);
        if a0.is_zero() {
            return Err(DiffOpsError::ZeroConstantTerm);
        }
        let logd = a0.derive().checked_div(&a0)?;
        let c = LinOp::d_pow(1)
            .compose(self)
            .sub(&self.left_scale(&logd));
        debug_assert!(c.coeff(0).is_zero());
        Ok(LinOp::new(c.coeffs.into_iter().skip(1).collect()))
    }
}

impl fmt::Display for LinOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let d = match i {
                0 => String::new(),
                1 => "D".into(),
                _ => format!("D^{i}"),
            };
            if *c == RatFun::one() && i > 0 {
                write!(f, "{d}")?;
            } else if i == 0 {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{d}")?;
            }
        }
        Ok(())
    }
}
