//! Symbolic-numeric analysis of second-order linear ODEs
//! `Y'' + a Y' + b Y = 0` with coefficients in Q(x): oscillation at
//! infinity, exact phase/amplitude expansions, zero-distribution laws and a
//! brute-force numerical oracle that checks them.
//!
//! The canonical form throughout is `Y'' + q Y = 0`.

pub mod exactalg;
pub mod numlab;
pub mod diffops;
pub mod oscillate;
pub mod phaseseries;
pub mod zerodist;
