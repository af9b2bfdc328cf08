//! Coefficient fields for formal series: Q and Q(sqrt m).

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Zero;

use super::quad::QuadExt;
use super::rat::Rat;

pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// The rational `r` as an element of the same field as `self`.
    fn embed(&self, r: Rat) -> Self;

    fn is_zero_elem(&self) -> bool;

    fn zero_like(&self) -> Self {
        self.embed(Rat::zero())
    }
}

impl Scalar for Rat {
    fn embed(&self, r: Rat) -> Self {
        r
    }

    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl Scalar for QuadExt {
    fn embed(&self, r: Rat) -> Self {
        QuadExt::rational(r, &self.m)
    }

    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}
