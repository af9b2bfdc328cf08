//! Exact arithmetic: rationals, polynomials and rational functions over Q
//! with d/dx, and a single quadratic extension Q(sqrt m).

pub mod parse;
pub mod poly;
pub mod quad;
pub mod rat;
pub mod ratfun;
pub mod scalar;

pub use parse::parse_ratfun;
pub use poly::Poly;
pub use quad::QuadExt;
pub use rat::Rat;
pub use ratfun::{CoeffExpansion, F64Fn, LeadingForm, RatFun};
pub use scalar::Scalar;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero function has no leading form")]
    ZeroFunction,
    #[error("not expandable in inverse powers only (leading exponent {k} > 0)")]
    NotExpandable { k: i64 },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
