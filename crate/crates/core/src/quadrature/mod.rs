//! Oscillation-aware Gauss–Legendre quadrature and the cached
//! Hardy–Littlewood integral.

mod cache;
mod gauss;
mod integrate;

pub use cache::{fingerprint, IntegralCache};
pub use gauss::GaussLegendre;
pub use integrate::{integrate, Integrator, QuadratureConfig};
