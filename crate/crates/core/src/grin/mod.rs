//! Paraxial light in graded-index media, n²(x, z) = n₀²[1 − g²(z)x²].
//!
//! The paraxial equation is a Schrödinger equation with z as time, n₀ as mass,
//! λbar = λ/2π as ħ and g(z) as oscillator frequency, so the diffraction
//! kernel is an oscillator propagator built from two rays.

mod beam;
mod envelope;
mod kernel;
mod modes;
mod rays;

pub use beam::{BeamBackend, BeamField};
pub use envelope::{EnvelopeInit, EnvelopeSolution, EnvelopeState};
pub use kernel::grin_kernel;
pub use modes::{mode_functions, ModeSum};
pub use rays::{solve_rays, RayPair, RayState};

use crate::error::{Error, Result};
use crate::numerics::Table1D;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// Gradient parameter g(z).
#[derive(Clone)]
pub enum IndexProfile {
    Constant(f64),
    /// Linear interpolation of (z, g) samples.
    Tabulated(Table1D<f64>),
    Expression(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for IndexProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexProfile::Constant(g) => write!(f, "Constant({g})"),
            IndexProfile::Tabulated(t) => write!(f, "Tabulated({} points)", t.abscissae().len()),
            IndexProfile::Expression(_) => write!(f, "Expression(..)"),
        }
    }
}

impl IndexProfile {
    pub fn at(&self, z: f64) -> f64 {
        match self {
            IndexProfile::Constant(g) => *g,
            IndexProfile::Tabulated(t) => t.eval(z),
            IndexProfile::Expression(f) => f(z),
        }
    }
}

/// Background index, gradient profile and vacuum wavelength.
#[derive(Debug, Clone)]
pub struct GrinMedium {
    pub n0: f64,
    pub profile: IndexProfile,
    pub wavelength: f64,
}

impl GrinMedium {
    pub fn new(n0: f64, profile: IndexProfile, wavelength: f64) -> Result<Self> {
        if !(n0 > 0.0) {
            return Err(Error::Domain(format!("background index must be positive, got {n0}")));
        }
        if !(wavelength > 0.0) {
            return Err(Error::Domain(format!("wavelength must be positive, got {wavelength}")));
        }
        Ok(Self { n0, profile, wavelength })
    }

    pub fn constant(n0: f64, g: f64, wavelength: f64) -> Result<Self> {
        Self::new(n0, IndexProfile::Constant(g), wavelength)
    }

    pub fn g(&self, z: f64) -> f64 {
        self.profile.at(z)
    }

    /// Vacuum wavenumber k = 2π/λ.
    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// λbar = λ/2π = 1/k.
    pub fn lambda_bar(&self) -> f64 {
        self.wavelength / (2.0 * PI)
    }

    /// e^{ikn₀Δz}, the axial carrier.
    pub fn carrier(&self, dz: f64) -> Complex64 {
        Complex64::from_polar(1.0, self.wavenumber() * self.n0 * dz)
    }

    /// max_z g(z)·x_max over `[0, z]`, sampled; paraxial GRIN optics needs this ≪ 1.
    pub fn inhomogeneity(&self, x_max: f64, z: f64) -> f64 {
        let samples = 257;
        (0..samples)
            .map(|i| self.g(z * i as f64 / (samples - 1) as f64).abs() * x_max)
            .fold(0.0, f64::max)
    }
}

/// Ray pair, envelope and medium for one propagation range, solved once.
#[derive(Debug, Clone)]
pub struct GrinSolver {
    medium: GrinMedium,
    z_max: f64,
    rays: RayPair,
    envelope: Option<EnvelopeSolution>,
}

impl GrinSolver {
    /// Solves the rays (and the envelope, if `init` allows it) over `[0, z_max]`.
    pub fn new(medium: GrinMedium, z_max: f64, init: EnvelopeInit) -> Result<Self> {
        let rays = solve_rays(&medium, z_max)?;
        let envelope = match EnvelopeSolution::solve(&medium, z_max, init) {
            Ok(e) => Some(e),
            Err(Error::InvalidInput(_)) if init == EnvelopeInit::FixedPoint => None,
            Err(e) => return Err(e),
        };
        Ok(Self { medium, z_max, rays, envelope })
    }

    pub fn medium(&self) -> &GrinMedium {
        &self.medium
    }

    pub fn z_max(&self) -> f64 {
        self.z_max
    }

    pub fn rays(&self) -> &RayPair {
        &self.rays
    }

    pub fn envelope(&self) -> Result<&EnvelopeSolution> {
        self.envelope.as_ref().ok_or_else(|| {
            Error::InvalidInput("no envelope solution: g(0) <= 0 requires explicit initial conditions".into())
        })
    }

    /// K(x_b, z; x_a, 0) from the ray pair.
    pub fn kernel(&self, x_a: f64, x_b: f64, z: f64) -> Result<Complex64> {
        kernel::kernel_from_rays(&self.medium, &self.rays, x_a, x_b, z)
    }

    /// Mode-sum kernel K(x_b, z_b; x_a, z_a).
    pub fn mode_kernel(&self, x_a: f64, x_b: f64, z_a: f64, z_b: f64, n_max: usize) -> Result<ModeSum> {
        modes::mode_kernel(x_a, x_b, z_a, z_b, self.envelope()?, &self.medium, n_max)
    }

    /// Propagates E(x, 0) sampled on `grid` to the plane `z`.
    pub fn propagate_beam(
        &self,
        field: &[Complex64],
        grid: &crate::lattice::SpatialGrid,
        z: f64,
        backend: BeamBackend,
    ) -> Result<BeamField> {
        beam::propagate_beam(self, field, grid, z, backend)
    }
}
