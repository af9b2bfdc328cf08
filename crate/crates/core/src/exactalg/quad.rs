//! The quadratic extension Q(sqrt m).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rat::{self, Rat};

/// `a + b sqrt(m)` with a fixed radicand `m > 0`. When `m` is the square of
/// a rational, `b` is always zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct QuadExt {
    #[serde(with = "rat::serde_str")]
    pub a: Rat,
    #[serde(with = "rat::serde_str")]
    pub b: Rat,
    #[serde(with = "rat::serde_str")]
    pub m: Rat,
}

impl QuadExt {
    pub fn new(a: Rat, b: Rat, m: Rat) -> Self {
        assert!(m.is_positive(), "radicand must be positive");
        match rat::sqrt_exact(&m) {
            Some(r) => QuadExt {
                a: a + b * r,
                b: Rat::zero(),
                m,
            },
            None => QuadExt { a, b, m },
        }
    }

    pub fn rational(a: Rat, m: &Rat) -> Self {
        QuadExt::new(a, Rat::zero(), m.clone())
    }

    /// `sqrt(m)` itself.
    pub fn sqrt(m: &Rat) -> Self {
        QuadExt::new(Rat::zero(), Rat::one(), m.clone())
    }

    pub fn zero(m: &Rat) -> Self {
        Self::rational(Rat::zero(), m)
    }

    pub fn one(m: &Rat) -> Self {
        Self::rational(Rat::one(), m)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadExt {
            a: self.a.clone(),
            b: -&self.b,
            m: self.m.clone(),
        }
    }

    /// `a^2 - m b^2`
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - &self.m * &self.b * &self.b
    }

    pub fn scale(&self, c: &Rat) -> Self {
        QuadExt {
            a: &self.a * c,
            b: &self.b * c,
            m: self.m.clone(),
        }
    }

    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rat::zero());
        let sb = self.b.cmp(&Rat::zero());
        if sb == Ordering::Equal || sa == sb {
            return if sa == Ordering::Equal { sb } else { sa };
        }
        if sa == Ordering::Equal {
            return sb;
        }
        // opposite signs: the larger square wins
        match (&self.a * &self.a).cmp(&(&self.b * &self.b * &self.m)) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn to_f64(&self) -> f64 {
        rat::to_f64(&self.a) + rat::to_f64(&self.b) * rat::to_f64(&self.m).sqrt()
    }

    pub fn recip(&self) -> Self {
        let n = self.norm();
        assert!(!n.is_zero(), "QuadExt division by zero");
        self.conj().scale(&n.recip())
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.m, other.m, "mixed radicands");
    }
}

impl Add for QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: QuadExt) -> QuadExt {
        self.check(&rhs);
        QuadExt {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
            m: self.m,
        }
    }
}

impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: QuadExt) -> QuadExt {
        self + (-rhs)
    }
}

impl Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: QuadExt) -> QuadExt {
        self.check(&rhs);
        QuadExt {
            a: &self.a * &rhs.a + &self.m * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            m: self.m,
        }
    }
}

impl Div for QuadExt {
    type Output = QuadExt;
    fn div(self, rhs: QuadExt) -> QuadExt {
        self * rhs.recip()
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            a: -self.a,
            b: -self.b,
            m: self.m,
        }
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let root = format!("√{}", rat::to_string(&self.m));
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", rat::to_string(&self.a)),
            (true, false) if self.b.is_one() => write!(f, "{root}"),
            (true, false) => write!(f, "{}·{root}", rat::to_string(&self.b)),
            (false, false) => {
                let sign = if self.b.is_negative() { "-" } else { "+" };
                let mag = self.b.abs();
                if mag.is_one() {
                    write!(f, "({} {sign} {root})", rat::to_string(&self.a))
                } else {
                    write!(f, "({} {sign} {}·{root})", rat::to_string(&self.a), rat::to_string(&mag))
                }
            }
        }
    }
}
