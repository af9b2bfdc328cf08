//! Differential algebra over Q(x): differential polynomials, Riccati
//! transforms, omega and sigma, linear operators with twisting and the
//! derivative operator, the Appell operator, compositional conjugation,
//! and reduction to the canonical form `Y'' + qY = 0`.
//!
//! Convention: everything here uses `Y'' + qY = 0`. Sources written for
//! `4Y'' + fY = 0` are translated with `f = 4q`; the only place the
//! 4-normalization appears is [`LinOp::four_normal_form`].

pub mod conj;
pub mod diffpoly;
pub mod linop;
pub mod riccati;

pub use conj::compositional_conjugate_table;
pub use diffpoly::DiffPoly;
pub use linop::LinOp;
pub use riccati::{omega, phase_equation, riccati_basis, sigma, sigma_of_sqrt, sigma_via_omega};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::{rat, AlgError, RatFun};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiffOpsError {
    #[error("{0}: argument must be nonzero")]
    ZeroArgument(&'static str),
    #[error("operator must have nonzero constant term A(1)")]
    ZeroConstantTerm,
    #[error("operator must be monic of order 2")]
    NotMonicSecondOrder,
    #[error(transparent)]
    Alg(#[from] AlgError),
}

/// `Y'' + a Y' + b Y = 0`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Equation {
    pub a: RatFun,
    pub b: RatFun,
}

impl Equation {
    pub fn new(a: RatFun, b: RatFun) -> Self {
        Equation { a, b }
    }

    /// `Y'' + qY = 0`.
    pub fn canonical(q: RatFun) -> Self {
        Equation {
            a: RatFun::zero(),
            b: q,
        }
    }

    pub fn operator(&self) -> LinOp {
        LinOp::monic_second_order(self.a.clone(), self.b.clone())
    }

    pub fn is_canonical(&self) -> bool {
        self.a.is_zero()
    }
}

/// The potential `q` of `Y'' + qY = 0`. In the 4-normalization
/// `4Y'' + fY = 0` the same equation has `f = 4q`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalPotential {
    pub q: RatFun,
}

impl CanonicalPotential {
    pub fn four_normalized(&self) -> RatFun {
        self.q.scale(&rat::int(4))
    }
}

/// `q = b - a'/2 - a^2/4`. Solutions of the equation are `G y` with
/// `y'' + qy = 0` and `G'/G = -a/2`.
pub fn canonical_potential(eq: &Equation) -> CanonicalPotential {
    let half = rat::rat(1, 2);
    let quarter = rat::rat(1, 4);
    let q = &(&eq.b - &eq.a.derive().scale(&half)) - &(&eq.a * &eq.a).scale(&quarter);
    CanonicalPotential { q }
}

/// `B = D^3 + 4q D + 2q'`, which annihilates every product `y z` of
/// solutions of `Y'' + qY = 0`. (In the 4-normalization, `D^3 + f D + f'/2`.)
pub fn appell_operator(q: &CanonicalPotential) -> LinOp {
    LinOp::new(vec![
        q.q.derive().scale(&rat::int(2)),
        q.q.scale(&rat::int(4)),
        RatFun::zero(),
        RatFun::one(),
    ])
}
