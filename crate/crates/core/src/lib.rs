//! Matroid machinery for the random-assignment matroid secretary problem.
//!
//! The crate is `no_std` (it needs `alloc`) and has no IO. It contains:
//!
//! * [`matroid`]: rank oracles for the supported matroid classes, minors,
//!   parallel extensions, matroid partition (k-fold union rank) and greedy.
//! * [`principal`]: densest sets `D(S, λ)`, principal sequences and exact
//!   rank-density curves.
//! * [`curve`], [`weights`], [`good_curves`]: the step-function algebra
//!   (downshifts, approximations), the weight functionals `η` and `F`, and
//!   the curve conditioning used by the aided algorithm.
//! * [`online`]: arrival streams with an online-protocol guard and every
//!   selection procedure built on top of them.
//!
//! File formats, the CLI and the Monte Carlo harness live in the
//! `ramsp-sim` crate.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod curve;
pub mod error;
pub mod fixtures;
pub mod good_curves;
pub mod matroid;
pub mod online;
pub mod principal;
pub mod set;
pub mod weights;

pub use curve::{Rational, RankDensityCurve, Step};
pub use error::{Error, Result};
pub use matroid::{MatroidExt, RankOracle};
pub use set::ElementSet;
pub use weights::WeightProfile;
