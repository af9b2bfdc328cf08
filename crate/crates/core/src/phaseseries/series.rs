//! Truncated power series in `t = 1/x` over an exact coefficient field.

use crate::exactalg::{rat, Rat, Scalar};

/// `sum_{j=0}^{N} c_j x^{-j} + O(x^{-N-1})`. Always holds `N + 1` entries.
#[derive(Clone, PartialEq, Debug)]
pub struct Series<T> {
    c: Vec<T>,
}

impl<T: Scalar> Series<T> {
    pub fn new(c: Vec<T>) -> Self {
        assert!(!c.is_empty(), "series needs at least one coefficient");
        Series { c }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.c
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn constant(&self, v: T) -> Self {
        let z = v.zero_like();
        let mut c = vec![z; self.c.len()];
        c[0] = v;
        Series { c }
    }

    fn zip(&self, o: &Self, f: impl Fn(T, T) -> T) -> Self {
        assert_eq!(self.c.len(), o.c.len(), "series orders differ");
        Series {
            c: self
                .c
                .iter()
                .zip(&o.c)
                .map(|(a, b)| f(a.clone(), b.clone()))
                .collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Series {
            c: self.c.iter().map(|a| a.clone() * a.embed(r.clone())).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.c.len();
        assert_eq!(n, o.c.len(), "series orders differ");
        let c = (0..n)
            .map(|k| {
                (0..=k).fold(self.c[0].zero_like(), |acc, i| {
                    acc + self.c[i].clone() * o.c[k - i].clone()
                })
            })
            .collect();
        Series { c }
    }

    /// d/dx: `x^{-j} -> -j x^{-j-1}`; the top coefficient falls off.
    pub fn derive(&self) -> Self {
        let z = self.c[0].zero_like();
        let c = (0..self.c.len())
            .map(|j| {
                if j == 0 {
                    z.clone()
                } else {
                    self.c[j - 1].clone() * z.embed(rat::int(-(j as i64 - 1)))
                }
            })
            .collect();
        Series { c }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.c[0].is_zero_elem(), "series reciprocal needs c_0 != 0");
        let inv0 = self.c[0].embed(rat::int(1)) / self.c[0].clone();
        let mut r: Vec<T> = vec![inv0.clone()];
        for k in 1..self.c.len() {
            let s = (1..=k).fold(inv0.zero_like(), |acc, i| {
                acc + self.c[i].clone() * r[k - i].clone()
            });
            r.push(-(s * inv0.clone()));
        }
        Series { c: r }
    }

    /// `self^alpha` for a series with `c_0 = 1`, by the J.C.P. Miller
    /// recurrence `n y_n = sum_{k=1}^n ((alpha+1) k - n) c_k y_{n-k}`.
    pub fn pow_rat(&self, alpha: &Rat) -> Self {
        let one = self.c[0].embed(rat::int(1));
        assert_eq!(self.c[0], one, "pow_rat needs leading coefficient 1");
        let mut y = vec![one.clone()];
        for n in 1..self.c.len() {
            let mut acc = one.zero_like();
            for k in 1..=n {
                let w = (alpha + rat::int(1)) * rat::int(k as i64) - rat::int(n as i64);
                acc = acc + self.c[k].clone() * y[n - k].clone() * one.embed(w);
            }
            y.push(acc * one.embed(Rat::new(1.into(), (n as i64).into())));
        }
        Series { c: y }
    }
}

/// `sigma(z) = (2 z z'' - 3 z'^2 + z^4) / z^2` on truncated series.
pub fn sigma_series<T: Scalar>(z: &Series<T>) -> Series<T> {
    let d1 = z.derive();
    let d2 = d1.derive();
    let z2 = z.mul(z);
    let num = z
        .mul(&d2)
        .scale(&rat::int(2))
        .sub(&d1.mul(&d1).scale(&rat::int(3)))
        .add(&z2.mul(&z2));
    num.mul(&z2.recip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::{int, rat};

    fn s(v: &[Rat]) -> Series<Rat> {
        Series::new(v.to_vec())
    }

    #[test]
    fn reciprocal_of_geometric() {
        // 1/(1 - t) = 1 + t + t^2 + ...
        let g = s(&[int(1), int(-1), int(0), int(0)]);
        assert_eq!(g.recip(), s(&[int(1), int(1), int(1), int(1)]));
    }

    #[test]
    fn derivative_in_x() {
        // d/dx (1 + 2/x + 3/x^2) = -2/x^2 - 6/x^3
        let f = s(&[int(1), int(2), int(3), int(0)]);
        assert_eq!(f.derive(), s(&[int(0), int(0), int(-2), int(-6)]));
    }

    #[test]
    fn square_root_squares_back() {
        let f = s(&[int(1), rat(1, 3), int(-2), rat(5, 7), int(1)]);
        let r = f.pow_rat(&rat(1, 2));
        assert_eq!(r.mul(&r), f);
        let ir = f.pow_rat(&rat(-1, 2));
        assert_eq!(ir.mul(&ir).mul(&f), f.constant(int(1)));
    }

    #[test]
    fn sigma_of_constant() {
        let z = s(&[int(3), int(0), int(0)]);
        assert_eq!(sigma_series(&z), s(&[int(9), int(0), int(0)]));
    }
}
