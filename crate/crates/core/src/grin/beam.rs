//! Diffraction-integral propagation of sampled fields.

use super::modes::mode_functions;
use super::GrinSolver;
use crate::error::{Error, Result};
use crate::lattice::SpatialGrid;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

// modes are added until the captured power is within this fraction of the input
const MODE_POWER_TOL: f64 = 1e-13;
const MODE_CAP: usize = 600;
const AGREEMENT_TOL: f64 = 1e-4;

/// Which representation evaluates the diffraction integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeamBackend {
    /// Grid quadrature against the ray kernel.
    Kernel,
    /// Projection on the z-dependent Hermite–Gauss modes.
    Modes,
    /// Both, with an error if they disagree.
    Checked,
}

/// Field on the output plane.
#[derive(Debug, Clone)]
pub struct BeamField {
    pub x: Vec<f64>,
    pub field: Vec<Complex64>,
    pub power_in: f64,
    pub power_out: f64,
    /// Number of modes used (modes backend only).
    pub modes_used: Option<usize>,
    /// max g(z)·x_max over the path is below 0.5.
    pub weakly_inhomogeneous: bool,
}

fn power(grid: &SpatialGrid, f: &[Complex64]) -> f64 {
    grid.weights().iter().zip(f).map(|(w, v)| w * v.norm_sqr()).sum()
}

fn via_kernel(solver: &GrinSolver, field: &[Complex64], grid: &SpatialGrid, z: f64) -> Result<Vec<Complex64>> {
    let medium = solver.medium();
    let r = solver.rays().at(z)?;
    let x_max = grid.x_min().abs().max(grid.x_max().abs());
    // phase gradient of the kernel in x_a is kn₀(H₂x_a − x_b)/H₁
    let max_spacing = PI * r.h1.abs() / (medium.wavenumber() * medium.n0 * (1.0 + r.h2.abs()) * x_max);
    grid.check_nyquist(max_spacing)?;
    let x = grid.points();
    let weighted: Vec<Complex64> = field.iter().zip(grid.weights()).map(|(f, w)| f * w).collect();
    x.par_iter()
        .map(|&xb| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (&xa, f) in x.iter().zip(&weighted) {
                acc += solver.kernel(xa, xb, z)? * f;
            }
            Ok(acc)
        })
        .collect()
}

fn via_modes(solver: &GrinSolver, field: &[Complex64], grid: &SpatialGrid, z: f64) -> Result<(Vec<Complex64>, usize)> {
    let env = solver.envelope()?;
    let medium = solver.medium();
    let start = env.at(0.0)?;
    let end = env.at(z)?;
    let x = grid.points();
    let w = grid.weights();
    let total = power(grid, field);
    let basis0: Vec<Vec<Complex64>> = x.par_iter().map(|&xi| mode_functions(MODE_CAP, xi, &start, medium)).collect();
    let mut coeffs = Vec::new();
    let mut captured = 0.0;
    for n in 0..=MODE_CAP {
        let c: Complex64 = basis0.iter().zip(field.iter().zip(&w)).map(|(b, (f, wi))| b[n].conj() * f * wi).sum();
        captured += c.norm_sqr();
        coeffs.push(c);
        if total - captured <= MODE_POWER_TOL * total {
            break;
        }
    }
    if total - captured > 1e-8 * total {
        return Err(Error::Tolerance(format!(
            "input field not captured by {} modes (missing power fraction {:e})",
            MODE_CAP + 1,
            (total - captured) / total
        )));
    }
    let n_used = coeffs.len();
    let carrier = medium.carrier(z);
    let out = x
        .par_iter()
        .map(|&xi| {
            let psi = mode_functions(n_used - 1, xi, &end, medium);
            psi.iter().zip(&coeffs).map(|(p, c)| p * c).sum::<Complex64>() * carrier
        })
        .collect();
    Ok((out, n_used))
}

pub(crate) fn propagate_beam(
    solver: &GrinSolver,
    field: &[Complex64],
    grid: &SpatialGrid,
    z: f64,
    backend: BeamBackend,
) -> Result<BeamField> {
    if field.len() != grid.len() {
        return Err(Error::InvalidInput(format!("field has {} samples, grid has {}", field.len(), grid.len())));
    }
    if !(z > 0.0) || z > solver.z_max() * (1.0 + 1e-12) {
        return Err(Error::Domain(format!("plane z = {z} outside (0, {}]", solver.z_max())));
    }
    let x_max = grid.x_min().abs().max(grid.x_max().abs());
    let weakly_inhomogeneous = solver.medium().inhomogeneity(x_max, z) < 0.5;
    let (out, modes_used) = match backend {
        BeamBackend::Kernel => (via_kernel(solver, field, grid, z)?, None),
        BeamBackend::Modes => {
            let (f, n) = via_modes(solver, field, grid, z)?;
            (f, Some(n))
        }
        BeamBackend::Checked => {
            let k = via_kernel(solver, field, grid, z)?;
            let (m, n) = via_modes(solver, field, grid, z)?;
            let scale = k.iter().map(|v| v.norm()).fold(0.0, f64::max);
            let diff = k.iter().zip(&m).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            if diff > AGREEMENT_TOL * scale {
                return Err(Error::Inconsistent(format!(
                    "kernel and mode backends differ by {:e} relative",
                    diff / scale
                )));
            }
            (k, Some(n))
        }
    };
    Ok(BeamField {
        x: grid.points(),
        power_in: power(grid, field),
        power_out: power(grid, &out),
        field: out,
        modes_used,
        weakly_inhomogeneous,
    })
}
