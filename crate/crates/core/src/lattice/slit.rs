//! Two-slit interference from kernel composition.
//!
//! The transverse coordinate is x, and flight along the axis is parametrised by
//! time. For free flight at fixed total time the screen is crossed at
//! τ* = T·d₁/(d₁ + d₂), so the composition integral reduces to an integral over
//! each slit aperture at that instant.

use super::SpatialGrid;
use crate::error::{Error, Result};
use crate::kernels::{free_kernel, ParticleParams, SpacetimeEndpoints};
use crate::numerics::composite_gauss_legendre;
use num_complex::Complex64;
use rayon::prelude::*;

/// How the screen is illuminated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceModel {
    /// Point source at transverse position `x` (the default).
    Point { x: f64 },
    /// Unit-amplitude plane wave arriving normal to the screen.
    Collimated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slit {
    pub center: f64,
    pub width: f64,
    pub open: bool,
}

/// Source, screen and detector layout.
#[derive(Debug, Clone)]
pub struct SlitGeometry {
    pub source: SourceModel,
    pub slits: [Slit; 2],
    /// Axial distance from the source to the screen.
    pub source_to_screen: f64,
    /// Axial distance from the screen to the detector plane.
    pub screen_to_detector: f64,
    pub total_time: f64,
    pub detector: SpatialGrid,
    /// Gauss–Legendre order per panel for the aperture integrals.
    pub order: usize,
}

impl SlitGeometry {
    /// Symmetric slits at ±separation/2 with a point source on axis.
    pub fn symmetric(separation: f64, width: f64, detector: SpatialGrid) -> Self {
        Self {
            source: SourceModel::Point { x: 0.0 },
            slits: [
                Slit { center: -0.5 * separation, width, open: true },
                Slit { center: 0.5 * separation, width, open: true },
            ],
            source_to_screen: 1.0,
            screen_to_detector: 1.0,
            total_time: 2.0,
            detector,
            order: 16,
        }
    }

    /// Instant at which the screen is crossed.
    pub fn screen_time(&self) -> f64 {
        self.total_time * self.source_to_screen / (self.source_to_screen + self.screen_to_detector)
    }

    fn validate(&self) -> Result<()> {
        for s in &self.slits {
            if !(s.width > 0.0) {
                return Err(Error::InvalidInput(format!("slit width must be positive, got {}", s.width)));
            }
        }
        let (a, b) = (&self.slits[0], &self.slits[1]);
        if (a.center - b.center).abs() < 0.5 * (a.width + b.width) {
            return Err(Error::InvalidInput("slits overlap".into()));
        }
        if !(self.source_to_screen > 0.0 && self.screen_to_detector > 0.0 && self.total_time > 0.0) {
            return Err(Error::InvalidInput("distances and total time must be positive".into()));
        }
        if self.order == 0 {
            return Err(Error::InvalidInput("quadrature order must be positive".into()));
        }
        Ok(())
    }
}

/// Detector-plane amplitudes and intensities.
#[derive(Debug, Clone)]
pub struct DoubleSlitPattern {
    pub x: Vec<f64>,
    pub psi1: Vec<Complex64>,
    pub psi2: Vec<Complex64>,
    /// |ψ₁ + ψ₂|².
    pub p: Vec<f64>,
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
    /// 2 Re{ψ₁ ψ₂*}.
    pub cross: Vec<f64>,
}

impl DoubleSlitPattern {
    /// max |P − P₁ − P₂| / (P₁ + P₂): zero when no interference is present.
    pub fn interference_visibility(&self) -> f64 {
        self.p
            .iter()
            .zip(self.p1.iter().zip(&self.p2))
            .map(|(p, (a, b))| if a + b > 0.0 { (p - a - b).abs() / (a + b) } else { 0.0 })
            .fold(0.0, f64::max)
    }
}

/// Amplitudes through each slit and the resulting intensity pattern.
pub fn double_slit_pattern(geom: &SlitGeometry, p: &ParticleParams<f64>) -> Result<DoubleSlitPattern> {
    geom.validate()?;
    let tau = geom.screen_time();
    let rest = geom.total_time - tau;
    let x = geom.detector.points();
    let x_far = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    let aperture = |slit: &Slit| -> Result<Vec<(f64, Complex64)>> {
        if !slit.open {
            return Ok(Vec::new());
        }
        let lo = slit.center - 0.5 * slit.width;
        let hi = slit.center + 0.5 * slit.width;
        // panels sized so the kernel phase changes by < 1 rad per panel
        let src_x = match geom.source {
            SourceModel::Point { x } => x,
            SourceModel::Collimated => slit.center,
        };
        let reach = |from: f64, t: f64| p.mass * (from.abs() + lo.abs().max(hi.abs())) / (p.hbar * t);
        let rate = reach(x_far, rest) + if matches!(geom.source, SourceModel::Point { .. }) { reach(src_x, tau) } else { 0.0 };
        let panels = ((slit.width * rate).ceil() as usize).max(4);
        let (nodes, weights) = composite_gauss_legendre(lo, hi, panels, geom.order);
        nodes
            .into_iter()
            .zip(weights)
            .map(|(xc, w)| {
                let incoming = match geom.source {
                    SourceModel::Point { x } => free_kernel(&SpacetimeEndpoints::new(x, xc, 0.0, tau), p)?,
                    SourceModel::Collimated => Complex64::new(1.0, 0.0),
                };
                Ok((xc, incoming * w))
            })
            .collect()
    };
    let nodes1 = aperture(&geom.slits[0])?;
    let nodes2 = aperture(&geom.slits[1])?;

    let through = |nodes: &[(f64, Complex64)], xb: f64| -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(xc, a) in nodes {
            acc += free_kernel(&SpacetimeEndpoints::new(xc, xb, tau, geom.total_time), p)? * a;
        }
        Ok(acc)
    };
    let amps: Vec<(Complex64, Complex64)> =
        x.par_iter().map(|&xb| Ok((through(&nodes1, xb)?, through(&nodes2, xb)?))).collect::<Result<_>>()?;
    let psi1: Vec<Complex64> = amps.iter().map(|a| a.0).collect();
    let psi2: Vec<Complex64> = amps.iter().map(|a| a.1).collect();
    let p_tot = amps.iter().map(|(a, b)| (a + b).norm_sqr()).collect();
    let p1 = psi1.iter().map(|a| a.norm_sqr()).collect();
    let p2 = psi2.iter().map(|a| a.norm_sqr()).collect();
    let cross = amps.iter().map(|(a, b)| 2.0 * (a * b.conj()).re).collect();
    Ok(DoubleSlitPattern { x, psi1, psi2, p: p_tot, p1, p2, cross })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlapping_slits_rejected() {
        let mut g = SlitGeometry::symmetric(1.0, 0.2, SpatialGrid::new(-1.0, 1.0, 11).unwrap());
        g.slits[1].center = -0.45;
        assert!(double_slit_pattern(&g, &ParticleParams::default()).is_err());
        g.slits[1].center = 0.5;
        g.slits[0].width = 0.0;
        assert!(double_slit_pattern(&g, &ParticleParams::default()).is_err());
    }

    #[test]
    fn closed_slit_removes_interference() {
        let mut g = SlitGeometry::symmetric(1.0, 0.2, SpatialGrid::new(-3.0, 3.0, 61).unwrap());
        g.slits[1].open = false;
        let pat = double_slit_pattern(&g, &ParticleParams::default()).unwrap();
        assert!(pat.interference_visibility() < 1e-12);
        assert!(pat.p.iter().zip(&pat.p1).all(|(a, b)| a == b));
    }
}
