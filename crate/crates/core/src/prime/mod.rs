//! Primes, `π(t)`, `li(t)`, the remainder `P(t)` and the Ingham integral.

mod ingham;
mod li;
mod store;

pub use ingham::{
    ingham_integral, inverse_ingham, remainder, remainder_integral, RemainderQuery,
    INVERSE_RESOLUTION,
};
pub use li::{exponential_integral, logarithmic_integral};
pub use store::{PrimeStore, BLOCK, MAX_LIMIT};
