//! ⟨a(t)⟩ for P-representation states, as a phase-space average.
//!
//! ⟨a(t)⟩ = (1/π)∫d²α d²β P(α) β |K(β, t; α, 0)|².
//! For a point mass the β-integrand is a (possibly squeezed) Gaussian, so the
//! Gauss–Hermite grid is recentred and sheared onto its measured mean and
//! covariance before the order is raised to convergence.

use crate::error::{Error, Result};
use crate::numerics::gauss_hermite;
use num_complex::Complex64;
use std::f64::consts::PI;

/// P(α) = Σ_k w_k δ²(α − α_k), weights positive and summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct PointMixture {
    components: Vec<(f64, Complex64)>,
}

impl PointMixture {
    pub fn point(alpha: Complex64) -> Self {
        Self { components: vec![(1.0, alpha)] }
    }

    /// Weights are normalised to sum to one.
    pub fn new(components: Vec<(f64, Complex64)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidInput("mixture needs at least one component".into()));
        }
        if components.iter().any(|(w, a)| !(*w > 0.0) || !w.is_finite() || !a.is_finite()) {
            return Err(Error::InvalidInput("mixture weights must be positive and amplitudes finite".into()));
        }
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        Ok(Self { components: components.into_iter().map(|(w, a)| (w / total, a)).collect() })
    }

    pub fn components(&self) -> &[(f64, Complex64)] {
        &self.components
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PhaseSpaceOptions {
    /// Initial variance scale of the quadrature grid (1 for coherent states).
    pub initial_scale: f64,
    pub tol: f64,
    pub max_order: usize,
}

impl Default for PhaseSpaceOptions {
    fn default() -> Self {
        Self { initial_scale: 1.0, tol: 1e-10, max_order: 160 }
    }
}

impl PhaseSpaceOptions {
    /// Grid sized for a state squeezed by r = 2κΔt: the wide quadrature of
    /// the Husimi function has variance e^r cosh(r)/2.
    pub fn squeezed(r: f64) -> Self {
        Self { initial_scale: r.abs().exp() * r.cosh(), ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expectation {
    pub value: Complex64,
    /// (1/π)∫|K|² d²β, which is 1 for a unitary evolution.
    pub norm: f64,
    pub order: usize,
    pub error_estimate: f64,
}

struct Moments {
    norm: f64,
    mean: [f64; 2],
    cov: [f64; 3],
}

/// β = center + L u with L lower triangular [[l11, 0], [l21, l22]].
#[derive(Clone, Copy)]
struct Frame {
    center: [f64; 2],
    l11: f64,
    l21: f64,
    l22: f64,
}

fn moments(frame: &Frame, order: usize, q: &dyn Fn(Complex64) -> f64) -> Moments {
    let (u, w) = gauss_hermite(order);
    let scaled: Vec<f64> = u.iter().zip(&w).map(|(u, w)| w * (u * u).exp()).collect();
    let jac = frame.l11 * frame.l22;
    let (mut s0, mut s1, mut s2) = (0.0, [0.0; 2], [0.0; 3]);
    for (i, &ui) in u.iter().enumerate() {
        for (j, &uj) in u.iter().enumerate() {
            let x = frame.center[0] + frame.l11 * ui;
            let y = frame.center[1] + frame.l21 * ui + frame.l22 * uj;
            let dens = scaled[i] * scaled[j] * q(Complex64::new(x, y)) * jac;
            s0 += dens;
            s1[0] += dens * x;
            s1[1] += dens * y;
            let (dx, dy) = (x - frame.center[0], y - frame.center[1]);
            s2[0] += dens * dx * dx;
            s2[1] += dens * dx * dy;
            s2[2] += dens * dy * dy;
        }
    }
    Moments { norm: s0, mean: s1, cov: s2 }
}

fn fit_frame(frame: &Frame, m: &Moments) -> Option<Frame> {
    if !(m.norm > 0.0) {
        return None;
    }
    let mean = [m.mean[0] / m.norm, m.mean[1] / m.norm];
    let (d0, d1) = (mean[0] - frame.center[0], mean[1] - frame.center[1]);
    // covariance about the new mean, doubled to match the e^{−u²} weight
    let cxx = 2.0 * (m.cov[0] / m.norm - d0 * d0);
    let cxy = 2.0 * (m.cov[1] / m.norm - d0 * d1);
    let cyy = 2.0 * (m.cov[2] / m.norm - d1 * d1);
    if !(cxx > 0.0) {
        return None;
    }
    let l11 = cxx.sqrt();
    let l21 = cxy / l11;
    let rest = cyy - l21 * l21;
    if !(rest > 0.0) || !l21.is_finite() {
        return None;
    }
    Some(Frame { center: mean, l11, l21, l22: rest.sqrt() })
}

fn point_expectation(alpha: Complex64, kernel: &(dyn Fn(Complex64, Complex64) -> Complex64 + Sync), opts: &PhaseSpaceOptions) -> Result<Expectation> {
    let q = |beta: Complex64| kernel(beta, alpha).norm_sqr() / PI;
    let s = opts.initial_scale.max(1e-6).sqrt();
    let mut frame = Frame { center: [alpha.re, alpha.im], l11: s, l21: 0.0, l22: s };
    for _ in 0..6 {
        let m = moments(&frame, 40, &q);
        match fit_frame(&frame, &m) {
            Some(next) => {
                let shift = (next.center[0] - frame.center[0]).hypot(next.center[1] - frame.center[1]);
                let stretch = (next.l11 / frame.l11 - 1.0).abs() + (next.l22 / frame.l22 - 1.0).abs();
                frame = next;
                if shift < 1e-9 && stretch < 1e-9 {
                    break;
                }
            }
            None => return Err(Error::Tolerance("phase-space integrand has no positive mass on the quadrature grid".into())),
        }
    }
    let mut prev: Option<Complex64> = None;
    let mut order = 16;
    loop {
        let m = moments(&frame, order, &q);
        let value = Complex64::new(m.mean[0], m.mean[1]);
        if let Some(p) = prev {
            let err = (value - p).norm();
            if err <= opts.tol * value.norm().max(1.0) {
                return Ok(Expectation { value, norm: m.norm, order, error_estimate: err });
            }
        }
        prev = Some(value);
        order += 16;
        if order > opts.max_order {
            return Err(Error::Tolerance(format!("phase-space quadrature not converged at order {}", opts.max_order)));
        }
    }
}

/// ⟨a(t)⟩ for the mixture `p`, with `kernel(β, α) = K(β, t; α, 0)`.
pub fn expectation_annihilation(
    p: &PointMixture,
    kernel: &(dyn Fn(Complex64, Complex64) -> Complex64 + Sync),
    opts: &PhaseSpaceOptions,
) -> Result<Expectation> {
    let mut total = Expectation { value: Complex64::default(), norm: 0.0, order: 0, error_estimate: 0.0 };
    for &(w, alpha) in p.components() {
        let e = point_expectation(alpha, kernel, opts)?;
        total.value += w * e.value;
        total.norm += w * e.norm;
        total.order = total.order.max(e.order);
        total.error_estimate += w * e.error_estimate;
    }
    Ok(total)
}
