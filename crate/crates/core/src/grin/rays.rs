//! Axial (H₁) and field (H₂) rays: Ḧ + g²(z)H = 0.

use super::GrinMedium;
use crate::error::{Error, Result};
use crate::numerics::{integrate, DenseSolution, OdeOptions};

pub(crate) const RAY_TOL: f64 = 1e-10;

/// H₁, Ḣ₁, H₂, Ḣ₂ at one plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayState {
    pub h1: f64,
    pub h1_dot: f64,
    pub h2: f64,
    pub h2_dot: f64,
}

impl RayState {
    /// H₁Ḣ₂ − H₂Ḣ₁ (−1 for the standard initial conditions).
    pub fn wronskian(&self) -> f64 {
        self.h1 * self.h2_dot - self.h2 * self.h1_dot
    }
}

/// Dense ray solution on `[0, z_max]` with H₁(0)=0, Ḣ₁(0)=1, H₂(0)=1, Ḣ₂(0)=0.
#[derive(Debug, Clone)]
pub struct RayPair {
    solution: DenseSolution,
    h1_scale: f64,
}

impl RayPair {
    pub fn z_max(&self) -> f64 {
        self.solution.span().1
    }

    pub fn at(&self, z: f64) -> Result<RayState> {
        if !(0.0..=self.z_max() * (1.0 + 1e-12)).contains(&z) {
            return Err(Error::Domain(format!("plane z = {z} outside solved range [0, {}]", self.z_max())));
        }
        let y = self.solution.eval(z);
        Ok(RayState { h1: y[0], h1_dot: y[1], h2: y[2], h2_dot: y[3] })
    }

    /// Samples on a z-mesh.
    pub fn sample(&self, mesh: &[f64]) -> Result<Vec<RayState>> {
        mesh.iter().map(|&z| self.at(z)).collect()
    }

    /// Largest |H₁| seen at the integrator's step boundaries; sets the focal-plane tolerance.
    pub fn h1_scale(&self) -> f64 {
        self.h1_scale
    }
}

pub fn solve_rays(medium: &GrinMedium, z_max: f64) -> Result<RayPair> {
    if !(z_max >= 0.0) {
        return Err(Error::Domain(format!("propagation distance must be non-negative, got {z_max}")));
    }
    let sol = integrate(
        |z, y, dy| {
            let g = medium.g(z);
            let g2 = g * g;
            dy[0] = y[1];
            dy[1] = -g2 * y[0];
            dy[2] = y[3];
            dy[3] = -g2 * y[2];
        },
        0.0,
        &[0.0, 1.0, 1.0, 0.0],
        z_max,
        &OdeOptions::with_tol(RAY_TOL),
    )
    .map_err(|f| Error::Tolerance(format!("ray integration failed near z = {}", f.time())))?;
    let h1_scale = sol.mesh().iter().map(|&z| sol.eval(z)[0].abs()).fold(z_max.min(1.0) * 1e-300, f64::max);
    Ok(RayPair { solution: sol, h1_scale })
}
