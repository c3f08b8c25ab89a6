//! Numerical building blocks shared by the physics modules.

pub mod accel;
pub mod interp;
pub mod ode;
pub mod quad;
pub mod special;

pub use accel::{wynn_epsilon, Extrapolation};
pub use interp::Table1D;
pub use ode::{integrate, DenseSolution, OdeFailure, OdeOptions};
pub use quad::{composite_gauss_legendre, gauss_hermite, gauss_legendre, integrate_adaptive, simpson, QuadResult, QuadValue};
pub use special::{fresnel_segment, fresnel_unit, hermite_functions};
