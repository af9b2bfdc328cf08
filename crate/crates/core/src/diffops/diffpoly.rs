//! Differential polynomials in one indeterminate over Q(x).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::exactalg::{rat, RatFun};

/// Exponent vector: `e[i]` is the power of the i-th derivative `Y^(i)`.
/// Trailing zeros are trimmed, so the constant monomial is empty.
pub type Monomial = Vec<u32>;

/// Sparse sum of monomials in `Y, Y', ..., Y^(r)` with nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, RatFun>,
}

fn trim(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

impl DiffPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: RatFun) -> Self {
        Self::term(Vec::new(), c)
    }

    pub fn one() -> Self {
        Self::constant(RatFun::one())
    }

    /// The i-th derivative of the indeterminate.
    pub fn var(i: usize) -> Self {
        let mut m = vec![0; i + 1];
        m[i] = 1;
        Self::term(m, RatFun::one())
    }

    pub fn term(m: Monomial, c: RatFun) -> Self {
        let mut p = Self::zero();
        p.add_term(trim(m), c);
        p
    }

    fn add_term(&mut self, m: Monomial, c: RatFun) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&m) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &RatFun)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[u32]) -> RatFun {
        self.terms
            .get(&trim(m.to_vec()))
            .cloned()
            .unwrap_or_else(RatFun::zero)
    }

    /// Highest derivative present; `None` if no indeterminate occurs.
    pub fn order(&self) -> Option<usize> {
        self.terms
            .keys()
            .filter_map(|m| m.len().checked_sub(1))
            .max()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// Terms of the given total degree.
    pub fn homogeneous_part(&self, d: u32) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.iter().sum::<u32>() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &RatFun) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    pub fn mul(&self, other: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let n = ma.len().max(mb.len());
                let m: Monomial = (0..n)
                    .map(|i| ma.get(i).unwrap_or(&0) + mb.get(i).unwrap_or(&0))
                    .collect();
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    /// Total derivative: coefficients by d/dx, `Y^(i) -> Y^(i+1)`.
    pub fn derive(&self) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.derive());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let mut nm = m.clone();
                nm[i] -= 1;
                if nm.len() <= i + 1 {
                    nm.resize(i + 2, 0);
                }
                nm[i + 1] += 1;
                out.add_term(trim(nm), c.scale(&rat::int(e as i64)));
            }
        }
        out
    }

    /// Substitutes `y, y', y'', ...` for `Y, Y', Y'', ...`.
    pub fn eval(&self, y: &RatFun) -> RatFun {
        self.eval_with(y, RatFun::derive)
    }

    /// Like [`eval`](Self::eval) with an arbitrary derivation used to form
    /// the successive derivatives of `y`. Coefficients are taken as is.
    pub fn eval_with(&self, y: &RatFun, deriv: impl Fn(&RatFun) -> RatFun) -> RatFun {
        let r = self.order().unwrap_or(0);
        let mut ders = vec![y.clone()];
        for i in 0..r {
            let next = deriv(&ders[i]);
            ders.push(next);
        }
        let mut acc = RatFun::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = &t * &ders[i].pow(e as i32).expect("nonnegative power");
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        // highest degree first, then highest order
        let mut keys: Vec<&Monomial> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| a.cmp(b))
        });
        let mut out = String::new();
        for (n, m) in keys.into_iter().enumerate() {
            let c = &self.terms[m];
            let mono = fmt_monomial(m, var);
            let cs = if c.is_constant() {
                let v = c.as_constant().unwrap();
                if v.is_one() && !mono.is_empty() {
                    String::new()
                } else if (-&v).is_one() && !mono.is_empty() {
                    "-".into()
                } else {
                    rat::to_string(&v)
                }
            } else {
                format!("({c})")
            };
            if n > 0 {
                out.push_str(" + ");
            }
            out.push_str(&cs);
            out.push_str(&mono);
        }
        out
    }
}

fn fmt_monomial(m: &Monomial, var: &str) -> String {
    let mut s = String::new();
    for (i, &e) in m.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let base = match i {
            0 => var.to_string(),
            1..=3 => format!("{var}{}", "'".repeat(i)),
            _ => format!("{var}^({i})"),
        };
        s.push_str(&base);
        if e > 1 {
            s.push_str(&format!("^{e}"));
        }
    }
    s
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("Y"))
    }
}
