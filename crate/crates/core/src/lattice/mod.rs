//! Time-sliced reconstruction of propagators.
//!
//! Two routes: exact iterated Gaussian integrals for actions quadratic in x,
//! and repeated application of a short-time kernel matrix on a spatial grid
//! for arbitrary potentials. Also wavefunction evolution and the two-slit
//! experiment.

mod evolve;
mod recursion;
mod slit;
mod transfer;

pub use evolve::{evolve_wavefunction, Evolved, FreeEvaluator, HarmonicEvaluator, KernelEvaluator};
pub use recursion::gaussian_recursion;
pub use slit::{double_slit_pattern, DoubleSlitPattern, Slit, SlitGeometry, SourceModel};
pub use transfer::{AbsorbingLayer, GridPropagator};

use crate::error::{Error, Result};
use crate::kernels::{ParticleParams, SpacetimeEndpoints};
use crate::potential::PotentialModel;
use crate::scalar::{lit, Real};
use num_complex::{Complex, Complex64};

/// Division of the evolution interval into `steps` slices of width ε = T/N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSlicing<T> {
    steps: usize,
    duration: T,
}

impl<T: Real> TimeSlicing<T> {
    pub fn new(steps: usize, duration: T) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidInput("at least one time slice is required".into()));
        }
        if !(duration > T::zero()) {
            return Err(Error::Domain(format!("slicing duration must be positive, got {duration}")));
        }
        Ok(Self { steps, duration })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn duration(&self) -> T {
        self.duration
    }

    pub fn epsilon(&self) -> T {
        self.duration / T::from_usize(self.steps).unwrap()
    }

    /// A(ε) = √(2πiħε/m).
    pub fn normalization(&self, p: &ParticleParams<T>) -> Complex<T> {
        let two_pi = T::PI() + T::PI();
        Complex::new(T::zero(), two_pi * p.hbar * self.epsilon() / p.mass).sqrt()
    }
}

/// Uniform grid of `n_points` nodes spanning `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl SpatialGrid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if n_points < 3 {
            return Err(Error::InvalidInput(format!("grid needs at least 3 points, got {n_points}")));
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidInput(format!("grid bounds must satisfy x_min < x_max, got [{x_min}, {x_max}]")));
        }
        Ok(Self { x_min, x_max, n_points })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn range(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn point(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    /// Trapezoid weights.
    pub fn weights(&self) -> Vec<f64> {
        let h = self.spacing();
        let mut w = vec![h; self.n_points];
        w[0] = 0.5 * h;
        w[self.n_points - 1] = 0.5 * h;
        w
    }

    /// Checks Δx < πħT / (m · x_range), the sampling bound for a kernel chirp.
    pub fn check_nyquist(&self, max_spacing: f64) -> Result<()> {
        let h = self.spacing();
        if h < max_spacing {
            Ok(())
        } else {
            Err(Error::Nyquist(format!("grid spacing {h} exceeds the sampling bound {max_spacing}")))
        }
    }
}

/// Where the potential is sampled inside each slice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SliceRule {
    /// ε·V((x_{i−1} + x_i)/2, t_i).
    #[default]
    Midpoint,
    /// ε·[V(x_{i−1}, t_{i−1}) + V(x_i, t_i)]/2.
    Trapezoid,
}

/// Sliced action Σ_i [m(x_i − x_{i−1})²/(2ε) − ε V_i] with t_i = t_a + iε and
/// V_i given by `rule`.
///
/// The midpoint rule carries an O(ε) error in the kernel amplitude: because
/// sliced paths are rough, (x_i − x_{i−1})² ~ ε, and the midpoint differs
/// from the trapezoid by mω²(x_i − x_{i−1})²/8 per slice. The trapezoid rule
/// is O(ε²).
pub fn lattice_action<T, V>(path: &[T], potential: V, mass: T, slicing: &TimeSlicing<T>, t_a: T, rule: SliceRule) -> Result<T>
where
    T: Real,
    V: Fn(T, T) -> T,
{
    if path.len() != slicing.steps() + 1 {
        return Err(Error::InvalidInput(format!(
            "path has {} points but {} slices need {}",
            path.len(),
            slicing.steps(),
            slicing.steps() + 1
        )));
    }
    let eps = slicing.epsilon();
    let half = lit::<T>(0.5);
    let mut total = T::zero();
    for (i, w) in path.windows(2).enumerate() {
        let t_prev = t_a + T::from_usize(i).unwrap() * eps;
        let t_i = t_a + T::from_usize(i + 1).unwrap() * eps;
        let dx = w[1] - w[0];
        let v = match rule {
            SliceRule::Midpoint => potential(half * (w[0] + w[1]), t_i),
            SliceRule::Trapezoid => half * (potential(w[0], t_prev) + potential(w[1], t_i)),
        };
        total = total + mass * dx * dx / (eps + eps) - eps * v;
    }
    Ok(total)
}

/// How [`lattice_kernel`] evaluates the sliced path integral.
#[derive(Debug, Clone)]
pub enum LatticeMethod {
    /// Exact iterated Gaussian integrals of the sliced action; requires a quadratic potential.
    GaussianRecursion(SliceRule),
    /// Repeated short-time kernel matrices on a grid.
    GridTransfer { grid: SpatialGrid, absorber: AbsorbingLayer },
}

impl LatticeMethod {
    pub fn grid(grid: SpatialGrid) -> Self {
        LatticeMethod::GridTransfer { grid, absorber: AbsorbingLayer::default() }
    }
}

/// Sliced path integral K_N(x_b, t_b; x_a, t_a).
pub fn lattice_kernel(
    ends: &SpacetimeEndpoints<f64>,
    p: &ParticleParams<f64>,
    potential: &PotentialModel,
    slicing: &TimeSlicing<f64>,
    method: &LatticeMethod,
) -> Result<Complex64> {
    let t = ends.duration();
    if !(t > 0.0) {
        return Err(Error::Domain(format!("elapsed time must be positive, got {t}")));
    }
    if (slicing.duration() - t).abs() > 1e-12 * t {
        return Err(Error::InvalidInput(format!(
            "slicing covers {} but endpoints span {}",
            slicing.duration(),
            t
        )));
    }
    match method {
        LatticeMethod::GaussianRecursion(rule) => {
            if !potential.is_quadratic() {
                return Err(Error::InvalidInput("Gaussian recursion needs a potential quadratic in x".into()));
            }
            gaussian_recursion(ends, p, |tt| potential.quadratic_coefficients(tt).unwrap(), slicing, *rule)
        }
        LatticeMethod::GridTransfer { grid, absorber } => {
            let prop = GridPropagator::new(p, potential, slicing, ends.t_a, *grid, *absorber)?;
            prop.kernel(ends.x_a, ends.x_b)
        }
    }
}
