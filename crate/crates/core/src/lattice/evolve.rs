//! ψ_b(x_b) = ∫ dx_a K(x_b, x_a; T) ψ_a(x_a) by grid quadrature.

use super::SpatialGrid;
use crate::error::{Error, Result};
use crate::kernels::{free_kernel, ho_kernel, OscillatorParams, ParticleParams, SpacetimeEndpoints};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// A propagator that can be sampled pointwise.
pub trait KernelEvaluator: Sync {
    fn kernel(&self, x_b: f64, x_a: f64, duration: f64) -> Result<Complex64>;

    /// Largest grid spacing that still resolves the kernel's phase over `x_range`.
    fn max_spacing(&self, x_range: f64, duration: f64) -> f64;
}

/// Free-particle kernel.
#[derive(Debug, Clone, Copy)]
pub struct FreeEvaluator(pub ParticleParams<f64>);

impl KernelEvaluator for FreeEvaluator {
    fn kernel(&self, x_b: f64, x_a: f64, duration: f64) -> Result<Complex64> {
        free_kernel(&SpacetimeEndpoints::over(x_a, x_b, duration), &self.0)
    }

    fn max_spacing(&self, x_range: f64, duration: f64) -> f64 {
        PI * self.0.hbar * duration / (self.0.mass * x_range)
    }
}

/// Harmonic-oscillator kernel.
#[derive(Debug, Clone, Copy)]
pub struct HarmonicEvaluator(pub OscillatorParams<f64>);

impl KernelEvaluator for HarmonicEvaluator {
    fn kernel(&self, x_b: f64, x_a: f64, duration: f64) -> Result<Complex64> {
        ho_kernel(&SpacetimeEndpoints::over(x_a, x_b, duration), &self.0)
    }

    fn max_spacing(&self, x_range: f64, duration: f64) -> f64 {
        // the free bound with T replaced by sin(ωT)/ω
        let p = self.0.particle;
        let w = self.0.omega;
        let eff = if w == 0.0 { duration } else { (w * duration).sin().abs() / w };
        PI * p.hbar * eff / (p.mass * x_range)
    }
}

/// Result of [`evolve_wavefunction`].
#[derive(Debug, Clone)]
pub struct Evolved {
    pub psi: Vec<Complex64>,
    pub norm_in: f64,
    pub norm_out: f64,
    /// Set when more than 1% of the norm was lost.
    pub leakage_warning: bool,
}

pub(crate) fn grid_norm(grid: &SpatialGrid, psi: &[Complex64]) -> f64 {
    grid.weights().iter().zip(psi).map(|(w, v)| w * v.norm_sqr()).sum()
}

/// Evolves samples of ψ on `grid` by `duration` with the given kernel.
pub fn evolve_wavefunction(
    psi_a: &[Complex64],
    grid: &SpatialGrid,
    kernel: &dyn KernelEvaluator,
    duration: f64,
) -> Result<Evolved> {
    if psi_a.len() != grid.len() {
        return Err(Error::InvalidInput(format!("wavefunction has {} samples, grid has {}", psi_a.len(), grid.len())));
    }
    grid.check_nyquist(kernel.max_spacing(grid.range(), duration))?;
    let x = grid.points();
    let w = grid.weights();
    let weighted: Vec<Complex64> = psi_a.iter().zip(&w).map(|(v, wi)| v * wi).collect();
    let psi: Vec<Complex64> = x
        .par_iter()
        .map(|&xb| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (&xa, v) in x.iter().zip(&weighted) {
                acc += kernel.kernel(xb, xa, duration)? * v;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let norm_in = grid_norm(grid, psi_a);
    let norm_out = grid_norm(grid, &psi);
    Ok(Evolved { leakage_warning: norm_out < 0.99 * norm_in, psi, norm_in, norm_out })
}
