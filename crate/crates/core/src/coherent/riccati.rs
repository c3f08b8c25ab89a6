//! Riccati coefficient X(t) and the quantities built on it.
//!
//! State (as complex pairs): X, Φ = ∫(ω + 4fX), J = ∫(g* + 2gX)e^{iΦ} and the
//! phase integral split by powers of α_a, Σ = Σ₀ + α_a Σ₁ + α_a² Σ₂.
//! Then Y = e^{−iΦ} and Z = −iYJ.

use super::QuadraticHamiltonian;
use crate::error::{Error, Result};
use crate::numerics::{integrate, DenseSolution, OdeFailure, OdeOptions};
use num_complex::Complex64;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const DIM: usize = 12;
/// |X| beyond this is treated as a finite-time singularity.
const BLOW_UP: f64 = 1e8;

/// Dense solution of the auxiliary equations on `[t_a, t_b]`.
#[derive(Debug, Clone)]
pub struct RiccatiSolution {
    dense: DenseSolution,
}

fn get(y: &[f64], k: usize) -> Complex64 {
    Complex64::new(y[2 * k], y[2 * k + 1])
}

fn put(y: &mut [f64], k: usize, v: Complex64) {
    y[2 * k] = v.re;
    y[2 * k + 1] = v.im;
}

/// Values of the auxiliary functions at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxiliaryValues {
    /// X(t), coefficient of α_b*².
    pub pair: Complex64,
    /// Y(t), coefficient of α_b* α_a.
    pub transfer: Complex64,
    /// Z(t), coefficient of α_b*.
    pub displacement: Complex64,
    /// Σ split as [Σ₀, Σ₁, Σ₂] by powers of α_a.
    pub phase: [Complex64; 3],
}

impl AuxiliaryValues {
    /// Σ(α_a) = Σ₀ + α_a Σ₁ + α_a² Σ₂.
    pub fn phase_integral(&self, alpha_a: Complex64) -> Complex64 {
        self.phase[0] + alpha_a * (self.phase[1] + alpha_a * self.phase[2])
    }
}

impl RiccatiSolution {
    pub fn span(&self) -> (f64, f64) {
        self.dense.span()
    }

    /// Accepted step boundaries of the adaptive integration.
    pub fn mesh(&self) -> Vec<f64> {
        self.dense.mesh()
    }

    pub fn at(&self, t: f64) -> AuxiliaryValues {
        let y = self.dense.eval(t);
        let phi = get(&y, 1);
        let transfer = (-I * phi).exp();
        AuxiliaryValues {
            pair: get(&y, 0),
            transfer,
            displacement: -I * transfer * get(&y, 2),
            phase: [get(&y, 3), get(&y, 4), get(&y, 5)],
        }
    }

    pub fn pair(&self, t: f64) -> Complex64 {
        self.at(t).pair
    }

    pub fn transfer(&self, t: f64) -> Complex64 {
        self.at(t).transfer
    }

    pub fn displacement(&self, t: f64) -> Complex64 {
        self.at(t).displacement
    }

    pub fn contains(&self, t: f64) -> bool {
        let (a, b) = self.span();
        let slack = 1e-12 * (1.0 + a.abs().max(b.abs()));
        t >= a.min(b) - slack && t <= a.max(b) + slack
    }
}

fn rhs(h: &QuadraticHamiltonian, t: f64, y: &[f64], dy: &mut [f64]) {
    let omega = h.frequency.at(t);
    let f = h.pairing.at(t);
    let g = h.drive.at(t);
    let x = get(y, 0);
    let phi = get(y, 1);
    let j = get(y, 2);
    let transfer = (-I * phi).exp();
    let disp = -I * transfer * j;

    put(dy, 0, -2.0 * I * omega * x - 4.0 * I * f * x * x - I * f.conj());
    put(dy, 1, omega + 4.0 * f * x);
    put(dy, 2, (g.conj() + 2.0 * g * x) * (I * phi).exp());
    put(dy, 3, f * (2.0 * x + disp * disp) + g * disp);
    put(dy, 4, 2.0 * f * transfer * disp + g * transfer);
    put(dy, 5, f * transfer * transfer);
}

/// Integrates the Riccati equation dX/dt = −2iωX − 4ifX² − if*, X(t_a) = 0,
/// together with Y, Z and Σ.
///
/// `tol` is the relative and absolute ODE tolerance (1e-12 is a good default).
pub fn solve_riccati(h: &QuadraticHamiltonian, t_a: f64, t_b: f64, tol: f64) -> Result<RiccatiSolution> {
    h.validate(t_a, t_b)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let y0 = [0.0; DIM];
    let opts = OdeOptions::with_tol(tol);
    let dense = integrate(|t, y, dy| rhs(h, t, y, dy), t_a, &y0, t_b, &opts).map_err(|e| match e {
        OdeFailure::TooManySteps { t } => Error::Tolerance(format!("Riccati integration exceeded the step budget at t = {t}")),
        other => Error::BlowUp { t: other.time() },
    })?;
    // Locate a near-singularity that the integrator stepped over.
    for t in dense.mesh() {
        let y = dense.eval(t);
        if get(&y, 0).norm() > BLOW_UP {
            return Err(Error::BlowUp { t });
        }
    }
    Ok(RiccatiSolution { dense })
}
