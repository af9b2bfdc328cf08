//! Dense univariate polynomials over Q.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rat::{self, Rat};

/// Polynomial with coefficients stored low degree first. The zero
/// polynomial is the empty sequence; otherwise the last entry is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn x() -> Self {
        Poly::from_coeffs(vec![Rat::zero(), Rat::one()])
    }

    pub fn constant(c: Rat) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        Poly::from_coeffs(v)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::from_coeffs(c.iter().map(|&v| rat::int(v)).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(lc) => self.scale(&lc.recip()),
            None => Poly::zero(),
        }
    }

    pub fn derive(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * rat::int(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let lc_inv = d.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if nd < dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    /// Composition `self(other)`.
    pub fn compose(&self, other: &Poly) -> Poly {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &(&acc * other) + &Poly::constant(c.clone()))
    }

    /// Cauchy bound: every complex root satisfies |r| < 1 + max |a_i / a_n|.
    /// Zero for constants.
    pub fn cauchy_bound(&self) -> Rat {
        let Some(n) = self.degree() else {
            return Rat::zero();
        };
        if n == 0 {
            return Rat::zero();
        }
        let lc = self.coeffs[n].abs();
        let m = self.coeffs[..n]
            .iter()
            .map(|c| c.abs() / &lc)
            .fold(Rat::zero(), |a, b| if b > a { b } else { a });
        Rat::one() + m
    }

    /// Sturm sequence of the square-free part.
    fn sturm_sequence(&self) -> Vec<Poly> {
        let g = Poly::gcd(self, &self.derive());
        let p = self.div_rem(&g).0;
        let mut seq = vec![p.clone(), p.derive()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(-&r);
        }
        seq
    }

    fn sign_changes(seq: &[Poly], x: &Rat) -> usize {
        let signs: Vec<bool> = seq
            .iter()
            .map(|p| p.eval(x))
            .filter(|v| !v.is_zero())
            .map(|v| v.is_positive())
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_real_roots(&self, a: &Rat, b: &Rat) -> usize {
        if self.degree().unwrap_or(0) == 0 || a >= b {
            return 0;
        }
        let seq = self.sturm_sequence();
        Self::sign_changes(&seq, a).saturating_sub(Self::sign_changes(&seq, b))
    }

    /// Whether some real root lies in `[a, b]`.
    pub fn has_root_in(&self, a: &Rat, b: &Rat) -> bool {
        self.eval(a).is_zero() || self.count_real_roots(a, b) > 0
    }

    /// An upper estimate within `width` of the largest real root, if any.
    pub fn largest_real_root(&self, width: &Rat) -> Option<Rat> {
        let b = self.cauchy_bound();
        let hi0 = &b + Rat::one();
        let lo0 = -hi0.clone();
        if self.count_real_roots(&lo0, &hi0) == 0 {
            return None;
        }
        let (mut lo, mut hi) = (lo0, hi0);
        let half = Rat::new(1.into(), 2.into());
        while &hi - &lo > *width {
            let mid = (&lo + &hi) * &half;
            if self.count_real_roots(&mid, &hi) > 0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(hi)
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(rat::to_f64).collect()
    }

    fn zip_with(&self, other: &Poly, f: impl Fn(&Rat, &Rat) -> Rat) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Rat::zero();
        Poly::from_coeffs(
            (0..n)
                .map(|i| {
                    f(
                        self.coeffs.get(i).unwrap_or(&z),
                        other.coeffs.get(i).unwrap_or(&z),
                    )
                })
                .collect(),
        )
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mag_s = rat::to_string(&mag);
            let mag_s = if mag.is_integer() {
                mag_s
            } else {
                format!("({mag_s})")
            };
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag_s}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag_s}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{mag_s}*x^{i}")?,
            }
        }
        Ok(())
    }
}
