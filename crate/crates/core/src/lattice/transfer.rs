//! Short-time kernel matrices on a uniform grid.
//!
//! The single-step free kernel is taken in the band-limited (sinc) basis of the
//! grid: G(d) = (1/2π)∫_{−π/Δx}^{π/Δx} exp(ikd − iħεk²/(2m)) dk, evaluated
//! exactly through Fresnel integrals. Sampling the continuum kernel
//! √(m/2πiħε)·exp(imd²/2ħε) directly is hopeless at small ε (its chirp is far
//! beyond the grid's Nyquist limit). The potential enters as e^{−iεV/2ħ} on
//! both sides of each step, and a smooth absorbing layer near the edges of the
//! box removes outgoing waves that would otherwise reflect.

use super::{SpatialGrid, TimeSlicing};
use crate::error::{Error, Result};
use crate::kernels::ParticleParams;
use crate::numerics::fresnel_segment;
use crate::potential::PotentialModel;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

// spectral window applied to point sources, as a fraction of the band edge π/Δx
const SOURCE_CUTOFF: f64 = 0.6;
const SOURCE_ORDER: i32 = 20;

/// Absorbing layer occupying the outer part of each side of the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsorbingLayer {
    /// Fraction of the half-width, measured from the centre, where absorption starts.
    pub start_fraction: f64,
    /// Integrated absorption exponent at the outer edge over the whole evolution.
    pub strength: f64,
}

impl Default for AbsorbingLayer {
    fn default() -> Self {
        Self { start_fraction: 0.5, strength: 300.0 }
    }
}

/// Grid propagator for one slicing: N applications of the single-step matrix.
pub struct GridPropagator {
    grid: SpatialGrid,
    x: Vec<f64>,
    steps: usize,
    /// Toeplitz generator h·G(jΔx), j = 0..n−1 (G is even).
    row: Vec<Complex64>,
    spectrum: Vec<Complex64>,
    /// e^{−iεV(x, t_k)/2ħ} per time level (one entry if V is static).
    half_phases: Vec<Vec<Complex64>>,
    mask: Vec<f64>,
    interior: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for GridPropagator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GridPropagator").field("grid", &self.grid).field("steps", &self.steps).finish()
    }
}

impl GridPropagator {
    pub fn new(
        p: &ParticleParams<f64>,
        potential: &PotentialModel,
        slicing: &TimeSlicing<f64>,
        t_a: f64,
        grid: SpatialGrid,
        absorber: AbsorbingLayer,
    ) -> Result<Self> {
        let total = slicing.duration();
        grid.check_nyquist(PI * p.hbar * total / (p.mass * grid.range()))?;
        if !(0.0..1.0).contains(&absorber.start_fraction) || absorber.strength < 0.0 {
            return Err(Error::InvalidInput("absorbing layer needs start_fraction in [0,1) and strength >= 0".into()));
        }
        let n = grid.len();
        let h = grid.spacing();
        let eps = slicing.epsilon();
        let x = grid.points();

        let a = p.hbar * eps / (2.0 * p.mass);
        let k_max = PI / h;
        let row: Vec<Complex64> = (0..n)
            .into_par_iter()
            .map(|j| {
                let d = j as f64 * h;
                let k0 = d / (2.0 * a);
                let seg = fresnel_segment(a, -k_max - k0, k_max - k0);
                Complex64::from_polar(h / (2.0 * PI), d * d / (4.0 * a)) * seg
            })
            .collect();

        let len = 2 * n;
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let mut spectrum = vec![Complex64::new(0.0, 0.0); len];
        spectrum[..n].copy_from_slice(&row);
        for j in 1..n {
            spectrum[len - j] = row[j];
        }
        forward.process(&mut spectrum);
        let scale = 1.0 / len as f64;
        spectrum.iter_mut().for_each(|s| *s *= scale);

        let phase_at = |t: f64| -> Vec<Complex64> {
            x.iter().map(|&xi| Complex64::from_polar(1.0, -eps * potential.value(xi, t) / (2.0 * p.hbar))).collect()
        };
        let half_phases = if potential.is_time_dependent() {
            (0..=slicing.steps()).map(|k| phase_at(t_a + k as f64 * eps)).collect()
        } else {
            vec![phase_at(t_a)]
        };

        let center = 0.5 * (grid.x_min() + grid.x_max());
        let half = 0.5 * grid.range();
        let interior = absorber.start_fraction * half;
        let rate = absorber.strength / slicing.steps() as f64;
        let mask = x
            .iter()
            .map(|&xi| {
                let u = (((xi - center).abs() - interior) / (half - interior)).max(0.0);
                (-rate * u.powi(6)).exp()
            })
            .collect();

        Ok(Self {
            grid,
            x,
            steps: slicing.steps(),
            row,
            spectrum,
            half_phases,
            mask,
            interior,
            forward,
            inverse,
        })
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    /// Half-width of the absorption-free central region.
    pub fn interior_half_width(&self) -> f64 {
        self.interior
    }

    fn phases(&self, level: usize) -> &[Complex64] {
        if self.half_phases.len() == 1 {
            &self.half_phases[0]
        } else {
            &self.half_phases[level]
        }
    }

    fn check_inside(&self, x: f64) -> Result<()> {
        let center = 0.5 * (self.grid.x_min() + self.grid.x_max());
        if (x - center).abs() > self.interior + 1e-12 {
            return Err(Error::Leakage(format!(
                "endpoint {x} lies in the absorbing layer (|x - {center}| > {}); enlarge the grid",
                self.interior
            )));
        }
        Ok(())
    }

    /// Applies the Toeplitz kinetic matrix in place, by circulant embedding.
    pub fn apply_kinetic(&self, psi: &mut [Complex64]) {
        let n = psi.len();
        let mut buf = vec![Complex64::new(0.0, 0.0); 2 * n];
        buf[..n].copy_from_slice(psi);
        self.forward.process(&mut buf);
        for (b, s) in buf.iter_mut().zip(&self.spectrum) {
            *b *= s;
        }
        self.inverse.process(&mut buf);
        psi.copy_from_slice(&buf[..n]);
    }

    /// Dense single-step kinetic matrix, built row-parallel; used for cross-checks.
    pub fn kinetic_matrix(&self) -> Vec<Vec<Complex64>> {
        let n = self.x.len();
        (0..n)
            .into_par_iter()
            .map(|i| (0..n).map(|j| self.row[i.abs_diff(j)]).collect())
            .collect()
    }

    /// One time slice: ψ ← mask · P(t_k) · G · P(t_{k−1}) · ψ.
    pub fn step(&self, psi: &mut [Complex64], k: usize) {
        for (v, ph) in psi.iter_mut().zip(self.phases(k - 1)) {
            *v *= ph;
        }
        self.apply_kinetic(psi);
        for ((v, ph), m) in psi.iter_mut().zip(self.phases(k)).zip(&self.mask) {
            *v *= ph * m;
        }
    }

    /// Evolves grid samples through all slices.
    pub fn propagate(&self, psi: &mut [Complex64]) {
        for k in 1..=self.steps {
            self.step(psi, k);
        }
    }

    fn sinc_weights(&self, x0: f64) -> Vec<f64> {
        let h = self.grid.spacing();
        self.x
            .iter()
            .map(|&xi| {
                let u = PI * (xi - x0) / h;
                if u.abs() < 1e-12 {
                    1.0
                } else {
                    u.sin() / u
                }
            })
            .collect()
    }

    /// Point source at `x_a`, band-limited with a smooth spectral window.
    ///
    /// ψ(x_j) = (1/2π)∫ W(k) e^{ik(x_j − x_a)} dk with W(k) = exp(−|k/k_c|^p).
    /// Since W vanishes to all orders at the band edge, the trapezoid rule in k
    /// is exact to rounding and the samples come from one inverse FFT.
    pub fn filtered_source(&self, x_a: f64) -> Vec<Complex64> {
        let n = self.x.len();
        let len = 2 * n;
        let h = self.grid.spacing();
        let k_max = PI / h;
        let dk = 2.0 * k_max / len as f64;
        let pos = (x_a - self.grid.x_min()) / h;
        let base = pos.floor();
        let shift = -(pos - base) * h;
        let mut buf: Vec<Complex64> = (0..len)
            .map(|m| {
                let signed = if m < n { m as f64 } else { m as f64 - len as f64 };
                let k = signed * dk;
                let w = (-(k / (SOURCE_CUTOFF * k_max)).abs().powi(SOURCE_ORDER)).exp();
                Complex64::from_polar(w * dk / (2.0 * PI), k * shift)
            })
            .collect();
        self.inverse.process(&mut buf);
        let base = base as i64;
        (0..n as i64)
            .map(|j| {
                let off = j - base;
                buf[off.rem_euclid(len as i64) as usize]
            })
            .collect()
    }

    /// Band-limited point source at `x_a` evolved over the full interval.
    pub fn propagate_point_source(&self, x_a: f64) -> Result<Vec<Complex64>> {
        self.check_inside(x_a)?;
        let mut psi = self.filtered_source(x_a);
        self.propagate(&mut psi);
        Ok(psi)
    }

    fn read_out(&self, psi: &[Complex64], x_b: f64) -> Complex64 {
        let h = self.grid.spacing();
        let pos = (x_b - self.grid.x_min()) / h;
        let nearest = pos.round();
        if (pos - nearest).abs() < 1e-9 {
            return psi[nearest as usize];
        }
        psi.iter().zip(self.sinc_weights(x_b)).map(|(v, w)| v * w).sum()
    }

    /// K_N(x_b, x_a) for a single pair.
    pub fn kernel(&self, x_a: f64, x_b: f64) -> Result<Complex64> {
        Ok(self.kernels_from(x_a, &[x_b])?[0])
    }

    /// K_N(x_b, x_a) for many final points sharing one source.
    pub fn kernels_from(&self, x_a: f64, x_b: &[f64]) -> Result<Vec<Complex64>> {
        for &xb in x_b {
            self.check_inside(xb)?;
        }
        let psi = self.propagate_point_source(x_a)?;
        Ok(x_b.iter().map(|&xb| self.read_out(&psi, xb)).collect())
    }

    /// K_N for independent (x_a, x_b) pairs, evaluated in parallel.
    pub fn kernels_for_pairs(&self, pairs: &[(f64, f64)]) -> Result<Vec<Complex64>> {
        pairs.par_iter().map(|&(xa, xb)| self.kernel(xa, xb)).collect()
    }
}
