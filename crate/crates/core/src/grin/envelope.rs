//! Complex envelope ξ'' + g²(z)ξ = 0 with ξ = s·e^{iγ}.

use super::GrinMedium;
use crate::error::{Error, Result};
use crate::numerics::{integrate, DenseSolution, OdeOptions};
use num_complex::Complex64;

/// Initial data for the envelope equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnvelopeInit {
    /// ξ(0) = √(n₀/g(0)), ξ'(0) = i g(0) ξ(0); needs g(0) > 0.
    FixedPoint,
    Custom { xi: Complex64, xi_dot: Complex64 },
}

/// Amplitude, phase and their z-derivatives at one plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeState {
    pub s: f64,
    pub s_dot: f64,
    pub gamma: f64,
    pub gamma_dot: f64,
    /// γ(z) − γ(0).
    pub phi: f64,
}

/// Dense envelope solution on `[0, z_max]`.
///
/// The phase γ is integrated alongside ξ (γ̇ = Im(ξ*ξ')/|ξ|²) so it is
/// continuous, with no branch unwrapping.
#[derive(Debug, Clone)]
pub struct EnvelopeSolution {
    solution: DenseSolution,
    gamma0: f64,
}

impl EnvelopeSolution {
    pub fn solve(medium: &GrinMedium, z_max: f64, init: EnvelopeInit) -> Result<Self> {
        if !(z_max >= 0.0) {
            return Err(Error::Domain(format!("propagation distance must be non-negative, got {z_max}")));
        }
        let (xi, xi_dot) = match init {
            EnvelopeInit::FixedPoint => {
                let g0 = medium.g(0.0);
                if !(g0 > 0.0) {
                    return Err(Error::InvalidInput(format!(
                        "g(0) = {g0}: the fixed-point initializer needs g(0) > 0; supply explicit initial conditions"
                    )));
                }
                let xi = Complex64::new((medium.n0 / g0).sqrt(), 0.0);
                (xi, Complex64::new(0.0, g0) * xi)
            }
            EnvelopeInit::Custom { xi, xi_dot } => (xi, xi_dot),
        };
        if xi.norm() == 0.0 || (xi.conj() * xi_dot).im == 0.0 {
            return Err(Error::InvalidInput("envelope initial data must have xi != 0 and Im(xi* xi') != 0".into()));
        }
        let gamma0 = xi.arg();
        let sol = integrate(
            |z, y, dy| {
                let g = medium.g(z);
                let g2 = g * g;
                dy[0] = y[2];
                dy[1] = y[3];
                dy[2] = -g2 * y[0];
                dy[3] = -g2 * y[1];
                dy[4] = (y[0] * y[3] - y[1] * y[2]) / (y[0] * y[0] + y[1] * y[1]);
            },
            0.0,
            &[xi.re, xi.im, xi_dot.re, xi_dot.im, gamma0],
            z_max,
            &OdeOptions::with_tol(super::rays::RAY_TOL),
        )
        .map_err(|f| Error::Tolerance(format!("envelope integration failed near z = {}", f.time())))?;
        Ok(Self { solution: sol, gamma0 })
    }

    pub fn z_max(&self) -> f64 {
        self.solution.span().1
    }

    pub fn xi(&self, z: f64) -> (Complex64, Complex64) {
        let y = self.solution.eval(z);
        (Complex64::new(y[0], y[1]), Complex64::new(y[2], y[3]))
    }

    pub fn at(&self, z: f64) -> Result<EnvelopeState> {
        if !(0.0..=self.z_max() * (1.0 + 1e-12)).contains(&z) {
            return Err(Error::Domain(format!("plane z = {z} outside solved range [0, {}]", self.z_max())));
        }
        let y = self.solution.eval(z);
        let xi = Complex64::new(y[0], y[1]);
        let xi_dot = Complex64::new(y[2], y[3]);
        let s = xi.norm();
        let w = xi.conj() * xi_dot;
        Ok(EnvelopeState { s, s_dot: w.re / s, gamma: y[4], gamma_dot: w.im / (s * s), phi: y[4] - self.gamma0 })
    }
}
