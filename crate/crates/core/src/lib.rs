//! Numerical laboratory for Jacob's ladders: prime-counting remainder
//! integrals, the Hardy–Littlewood integral on the critical line, and
//! finite-height checks of the asymptotic formulas that connect them.

// Guards are written `!(x > 0.0)` so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod error;
pub mod ladder;
pub mod prime;
pub mod puzzles;
pub mod quadrature;
pub mod verification;
pub mod zeta;

pub use constants::{MathConstants, CONSTANTS};
pub use error::{LabError, Result};
