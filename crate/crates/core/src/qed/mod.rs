//! Dressed-field calculators: one-dimensional lossy Green's functions and
//! down-conversion, spontaneous emission in a homogeneous dielectric, and the
//! effective dielectric function of a polarizable medium with a reservoir.

mod dielectric;
mod emission;
mod spdc;

pub use dielectric::{effective_dielectric, EffectiveDielectricModel, ReservoirResponse};
pub use emission::{imag_green_k_quadrature, imag_green_loop, spontaneous_rate, EmitterEnvironment, KQuadrature};
pub use spdc::{
    biphoton_amplitude_numeric, biphoton_probability_numeric, green_1d, spdc_probability, DispersiveMedium1D, Wavevector,
};
