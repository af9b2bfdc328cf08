//! Compositional conjugation: writing `D^n` in terms of a new derivation
//! `delta` with `D = phi * delta`.

use super::diffpoly::DiffPoly;

/// `table[n-1][k-1] = G^n_k`, the coefficients in
/// `D^n = G^n_n(phi) delta^n + ... + G^n_1(phi) delta`, as differential
/// polynomials in `X` (derivatives taken with respect to `delta`).
///
/// Built from `G^{n+1}_k = X (delta(G^n_k) + G^n_{k-1})`.
pub fn compositional_conjugate_table(n: usize) -> Vec<Vec<DiffPoly>> {
    let x = DiffPoly::var(0);
    let mut table: Vec<Vec<DiffPoly>> = Vec::with_capacity(n);
    if n == 0 {
        return table;
    }
    table.push(vec![x.clone()]);
    for m in 1..n {
        let prev = &table[m - 1];
        let row = (1..=m + 1)
            .map(|k| {
                let a = prev.get(k - 1).map(DiffPoly::derive).unwrap_or_default();
                let b = if k >= 2 { prev[k - 2].clone() } else { DiffPoly::zero() };
                x.mul(&a.add(&b))
            })
            .collect();
        table.push(row);
    }
    table
}
