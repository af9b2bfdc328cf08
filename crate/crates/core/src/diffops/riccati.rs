//! Riccati polynomials and the differential rational functions omega and
//! sigma.

use super::diffpoly::DiffPoly;
use super::DiffOpsError;
use crate::exactalg::{rat, RatFun};

/// `R_0 = 1`, `R_{n+1} = Z R_n + R_n'`; `R_n(y'/y) = y^(n)/y`.
pub fn riccati_basis(n: usize) -> DiffPoly {
    let z = DiffPoly::var(0);
    (0..n).fold(DiffPoly::one(), |r, _| z.mul(&r).add(&r.derive()))
}

/// `omega(z) = -(2z' + z^2)`.
pub fn omega(z: &RatFun) -> RatFun {
    -(&z.derive().scale(&rat::int(2)) + &(z * z))
}

/// `sigma(y) = (2 y y'' - 3 y'^2 + y^4) / y^2`.
pub fn sigma(y: &RatFun) -> Result<RatFun, DiffOpsError> {
    if y.is_zero() {
        return Err(DiffOpsError::ZeroArgument("sigma"));
    }
    let d1 = y.derive();
    let d2 = d1.derive();
    let y2 = y * y;
    let num = &(&(y * &d2).scale(&rat::int(2)) - &(&d1 * &d1).scale(&rat::int(3))) + &(&y2 * &y2);
    let s = num.checked_div(&y2)?;
    debug_assert_eq!(s, sigma_via_omega(y));
    Ok(s)
}

/// `omega(-y'/y) + y^2`, the second route to sigma.
pub fn sigma_via_omega(y: &RatFun) -> RatFun {
    let logd = y.derive().checked_div(y).expect("nonzero y");
    &omega(&-logd) + &(y * y)
}

/// `sigma(sqrt h)` without leaving Q(x): for `y^2 = h`,
/// `sigma(y) = h''/h - (5/4) (h'/h)^2 + h`.
pub fn sigma_of_sqrt(h: &RatFun) -> Result<RatFun, DiffOpsError> {
    if h.is_zero() {
        return Err(DiffOpsError::ZeroArgument("sigma_of_sqrt"));
    }
    let d1 = h.derive();
    let d2 = d1.derive();
    let l = d1.checked_div(h)?;
    Ok(&(&d2.checked_div(h)? - &(&l * &l).scale(&rat::rat(5, 4))) + h)
}

/// The differential polynomial `2YY'' - 3Y'^2 + Y^4 - 4qY^2` whose zeros
/// are the `z = 2 phi'` of phases of `Y'' + qY = 0`.
pub fn phase_equation(q: &RatFun) -> DiffPoly {
    DiffPoly::term(vec![1, 0, 1], RatFun::from_int(2))
        .add(&DiffPoly::term(vec![0, 2], RatFun::from_int(-3)))
        .add(&DiffPoly::term(vec![4], RatFun::one()))
        .add(&DiffPoly::term(vec![2], q.scale(&rat::int(-4))))
}
