//! Diffraction kernel from the ray pair.

use super::rays::{solve_rays, RayPair};
use super::GrinMedium;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

// |H₁| below this fraction of its running scale counts as a focal plane
const FOCAL_TOL: f64 = 1e-8;

pub(crate) fn kernel_from_rays(medium: &GrinMedium, rays: &RayPair, x_a: f64, x_b: f64, z: f64) -> Result<Complex64> {
    if !(z > 0.0) {
        return Err(Error::Domain(format!("propagation distance must be positive, got {z}")));
    }
    let r = rays.at(z)?;
    if r.h1.abs() <= FOCAL_TOL * rays.h1_scale() {
        return Err(Error::Caustic(format!("focal plane at z = {z} (H1 = {:e})", r.h1)));
    }
    let kn = medium.wavenumber() * medium.n0;
    let pref = (Complex64::new(kn, 0.0) / Complex64::new(0.0, 2.0 * PI * r.h1)).sqrt();
    let phase = kn * (r.h1_dot * x_b * x_b + r.h2 * x_a * x_a - 2.0 * x_a * x_b) / (2.0 * r.h1);
    Ok(pref * medium.carrier(z) * Complex64::from_polar(1.0, phase))
}

/// √(kn₀/(2πiH₁)) · e^{ikn₀z} · exp[ikn₀(Ḣ₁x_b² + H₂x_a² − 2x_a x_b)/(2H₁)].
///
/// Solves the rays on every call; use [`super::GrinSolver`] for repeated evaluation.
pub fn grin_kernel(x_a: f64, x_b: f64, z: f64, medium: &GrinMedium) -> Result<Complex64> {
    let rays = solve_rays(medium, z)?;
    kernel_from_rays(medium, &rays, x_a, x_b, z)
}
