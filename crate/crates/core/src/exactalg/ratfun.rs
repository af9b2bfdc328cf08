//! Rational functions over Q with the derivation d/dx.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::Poly;
use super::rat::{self, Rat};
use super::AlgError;

/// `num / den` with `den` monic and `gcd(num, den) = 1`, so equality of
/// rational functions is structural equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

/// `f(t) = c t^k (1 + o(1))` as `t -> +inf`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LeadingForm {
    #[serde(with = "rat::serde_str")]
    pub c: Rat,
    pub k: i64,
}

/// Truncated Laurent expansion at infinity,
/// `sum_{j = start}^{order} coeffs[j - start] x^{-j} + O(x^{-order-1})`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CoeffExpansion {
    pub start: i64,
    #[serde(with = "rat::serde_vec")]
    pub coeffs: Vec<Rat>,
    pub order: i64,
}

impl CoeffExpansion {
    /// Coefficient of `x^{-j}`; zero outside the stored range.
    pub fn coeff(&self, j: i64) -> Rat {
        if j < self.start || j > self.order {
            return Rat::zero();
        }
        self.coeffs
            .get((j - self.start) as usize)
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// The truncation as an exact rational function.
    pub fn to_ratfun(&self) -> RatFun {
        let mut acc = RatFun::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let j = self.start + i as i64;
            acc = &acc + &RatFun::monomial(c.clone(), -j);
        }
        acc
    }
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self, AlgError> {
        if den.is_zero() {
            return Err(AlgError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = Poly::gcd(&num, &den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lc = den.leading().expect("nonzero").recip();
        Ok(RatFun {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    pub fn zero() -> Self {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn x() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(rat::int(n))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    /// `c * x^k` for any integer `k`.
    pub fn monomial(c: Rat, k: i64) -> Self {
        if k >= 0 {
            Self::from_poly(Poly::monomial(c, k as usize))
        } else {
            RatFun::new(Poly::constant(c), Poly::monomial(Rat::one(), (-k) as usize))
                .expect("nonzero denominator")
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn checked_div(&self, other: &RatFun) -> Result<RatFun, AlgError> {
        if other.is_zero() {
            return Err(AlgError::DivisionByZero);
        }
        RatFun::new(&self.num * &other.den, &self.den * &other.num)
    }

    pub fn recip(&self) -> Result<RatFun, AlgError> {
        RatFun::one().checked_div(self)
    }

    pub fn scale(&self, c: &Rat) -> RatFun {
        if c.is_zero() {
            return RatFun::zero();
        }
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, n: i32) -> Result<RatFun, AlgError> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let e = n.unsigned_abs();
        Ok(RatFun {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// Quotient-rule derivative.
    pub fn derive(&self) -> RatFun {
        let n = &(&self.num.derive() * &self.den) - &(&self.num * &self.den.derive());
        RatFun::new(n, &self.den * &self.den).expect("nonzero denominator")
    }

    /// `f(x + d)`.
    pub fn shift(&self, d: &Rat) -> RatFun {
        let s = Poly::from_coeffs(vec![d.clone(), Rat::one()]);
        RatFun::new(self.num.compose(&s), self.den.compose(&s)).expect("nonzero denominator")
    }

    pub fn eval(&self, x: &Rat) -> Result<Rat, AlgError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(AlgError::DivisionByZero);
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        F64Fn::new(self).eval(x)
    }

    pub fn leading_form(&self) -> Result<LeadingForm, AlgError> {
        let (Some(dn), Some(dd)) = (self.num.degree(), self.den.degree()) else {
            return Err(AlgError::ZeroFunction);
        };
        Ok(LeadingForm {
            c: self.num.leading().cloned().unwrap() / self.den.leading().cloned().unwrap(),
            k: dn as i64 - dd as i64,
        })
    }

    /// Some `T >= 0` with no real pole in `[T, inf)`, from the Cauchy bound
    /// of the denominator rounded up.
    pub fn pole_free_bound(&self) -> Rat {
        Rat::from_integer(rat::ceil_int(&self.den.cauchy_bound()))
    }

    /// Some `T >= 0` beyond which the function has neither zeros nor poles.
    pub fn sign_stable_bound(&self) -> Rat {
        let a = self.den.cauchy_bound();
        let b = self.num.cauchy_bound();
        Rat::from_integer(rat::ceil_int(if a > b { &a } else { &b }))
    }

    /// Whether the denominator vanishes somewhere on `[a, b]`.
    pub fn has_pole_in(&self, a: &Rat, b: &Rat) -> bool {
        self.den.has_root_in(a, b)
    }

    /// Whether the function vanishes somewhere on `[a, b]`.
    pub fn has_zero_in(&self, a: &Rat, b: &Rat) -> bool {
        self.num.is_zero() || self.num.has_root_in(a, b)
    }

    /// Laurent expansion in `x^{-1}` up to `x^{-order}`.
    pub fn expand_at_infinity(&self, order: i64) -> Result<CoeffExpansion, AlgError> {
        let lf = self.leading_form()?;
        if lf.k > 0 {
            return Err(AlgError::NotExpandable { k: lf.k });
        }
        let k = lf.k;
        let start = -k;
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        let rev_num: Vec<Rat> = (0..=dn).map(|i| self.num.coeff(dn - i)).collect();
        let rev_den: Vec<Rat> = (0..=dd).map(|i| self.den.coeff(dd - i)).collect();
        // series quotient in t = 1/x; rev_den[0] = 1 since den is monic
        let terms = (order - start + 1).max(0) as usize;
        let mut s: Vec<Rat> = Vec::with_capacity(terms);
        for i in 0..terms {
            let mut v = rev_num.get(i).cloned().unwrap_or_else(Rat::zero);
            for m in 1..=i.min(dd) {
                v -= &rev_den[m] * &s[i - m];
            }
            s.push(v);
        }
        Ok(CoeffExpansion {
            start,
            coeffs: s,
            order,
        })
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.den == rhs.den {
            return RatFun::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        RatFun::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .unwrap()
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        RatFun::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: RatFun) -> RatFun { (&self).$m(&rhs) }
        }
        impl $tr<&RatFun> for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: &RatFun) -> RatFun { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        -&self
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            return write!(f, "{}", self.num);
        }
        let single = |p: &Poly| p.coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
        let wrap = |p: &Poly| {
            if single(p) {
                p.to_string()
            } else {
                format!("({p})")
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl Serialize for RatFun {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RatFun {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        super::parse::parse_ratfun(&s).map_err(serde::de::Error::custom)
    }
}

/// Floating-point evaluator for a fixed rational function. Large
/// arguments are evaluated in `1/x` so that high degrees do not overflow.
#[derive(Clone, Debug)]
pub struct F64Fn {
    num: Vec<f64>,
    den: Vec<f64>,
}

impl F64Fn {
    pub fn new(f: &RatFun) -> Self {
        F64Fn {
            num: f.num.to_f64_coeffs(),
            den: f.den.to_f64_coeffs(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.num.is_empty() {
            return 0.0;
        }
        if x.abs() <= 1.0 {
            return horner(&self.num, x) / horner(&self.den, x);
        }
        let t = x.recip();
        let rn = self.num.iter().fold(0.0, |acc, c| acc * t + c);
        let rd = self.den.iter().fold(0.0, |acc, c| acc * t + c);
        let k = self.num.len() as i32 - self.den.len() as i32;
        x.powi(k) * rn / rd
    }
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse::parse_ratfun;
    use crate::exactalg::rat::{int, rat};

    fn p(s: &str) -> RatFun {
        parse_ratfun(s).unwrap()
    }

    #[test]
    fn field_ops() {
        assert_eq!(&p("1/x") + &p("1/x"), p("2/x"));
        assert_eq!(&p("x/(x^2-1)") * &p("x^2-1"), p("x"));
        assert_eq!(
            p("(x+1)/(x-1)").checked_div(&p("x+1")).unwrap(),
            p("1/(x-1)")
        );
        assert_eq!(p("x").checked_div(&RatFun::zero()), Err(AlgError::DivisionByZero));
    }

    #[test]
    fn quotient_cross_checks_gcd() {
        // (x+1)/(x-1) / (x+1): numerator and denominator before cancelling
        let n = Poly::from_ints(&[1, 1]);
        let d = &Poly::from_ints(&[-1, 1]) * &Poly::from_ints(&[1, 1]);
        let g = Poly::gcd(&n, &d);
        assert_eq!(g, Poly::from_ints(&[1, 1]));
        let expected = RatFun::new(n.div_rem(&g).0, d.div_rem(&g).0).unwrap();
        assert_eq!(
            p("(x+1)/(x-1)").checked_div(&p("x+1")).unwrap(),
            expected
        );
    }

    #[test]
    fn normalization_makes_den_monic() {
        let f = p("(2*x)/(4*x^2 - 4)");
        assert_eq!(f.den().leading(), Some(&int(1)));
        assert_eq!(f, p("(1/2)*x/(x^2-1)"));
    }

    #[test]
    fn derivatives() {
        assert_eq!(p("x").derive(), RatFun::one());
        assert_eq!(p("1/x").derive(), p("-1/x^2"));
        assert_eq!(p("x/(x^2-1)").derive(), p("(-x^2-1)/(x^2-1)^2"));
        assert_eq!(p("7").derive(), RatFun::zero());
    }

    #[test]
    fn leading_forms() {
        assert_eq!(RatFun::one().leading_form().unwrap(), LeadingForm { c: int(1), k: 0 });
        let f1 = p("((1+1/4)*x^2 - 1 + 1/2)/(x^2-1)^2");
        assert_eq!(f1.leading_form().unwrap(), LeadingForm { c: rat(5, 4), k: -2 });
        assert_eq!(p("-x").leading_form().unwrap(), LeadingForm { c: int(-1), k: 1 });
        assert_eq!(RatFun::zero().leading_form(), Err(AlgError::ZeroFunction));
    }

    #[test]
    fn pole_free_bounds() {
        assert!(p("1/x").pole_free_bound() >= int(0));
        assert!(p("1/(x^2-1)").pole_free_bound() >= int(1));
        assert_eq!(p("1").pole_free_bound(), int(0));
        assert!(p("1/(x^2 - 9*x + 20)").pole_free_bound() > int(5));
    }

    #[test]
    fn expansions() {
        let coulomb = p("1 - 2/x - 0/x^2");
        let e = coulomb.expand_at_infinity(4).unwrap();
        assert_eq!(e.start, 0);
        assert_eq!(e.coeffs, vec![int(1), int(-2), int(0), int(0), int(0)]);
        // geometric series oracle: x/(x+1) = 1/(1 + 1/x) = sum (-1)^j x^{-j}
        let g = p("x/(x+1)").expand_at_infinity(3).unwrap();
        let oracle: Vec<Rat> = (0..4).map(|j| int(if j % 2 == 0 { 1 } else { -1 })).collect();
        assert_eq!(g.coeffs, oracle);
        assert_eq!(p("1").expand_at_infinity(2).unwrap().coeffs, vec![int(1), int(0), int(0)]);
        assert_eq!(p("x").expand_at_infinity(2), Err(AlgError::NotExpandable { k: 1 }));
        let h = p("1/x^2").expand_at_infinity(3).unwrap();
        assert_eq!(h.start, 2);
        assert_eq!(h.coeff(2), int(1));
        assert_eq!(h.coeff(3), int(0));
    }

    #[test]
    fn f64_eval_handles_large_degree() {
        let f = p("(x^20 + 1)/(x^19)");
        let v = f.eval_f64(1e30);
        assert!((v / 1e30 - 1.0).abs() < 1e-12);
        assert!((p("1/(x^2-1)").eval_f64(0.5) + 4.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn display_reparses() {
        for s in ["x", "1/x", "(5/4)*x^2 - 1/2", "((5/4)*x^2 - (1/2))/(x^2-1)^2", "-x", "-2/(x^3+1)"] {
            let f = p(s);
            assert_eq!(p(&f.to_string()), f, "{s} -> {f}");
        }
    }
}
