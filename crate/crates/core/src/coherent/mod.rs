//! Coherent-state propagators for single-mode quadratic Hamiltonians
//!
//! H(t) = ω(t) a†a + [f(t) a² + g(t) a + h.c.].
//!
//! The propagator between coherent states is Gaussian in α_b* and α_a; its
//! coefficients follow from one complex Riccati equation and three
//! quadratures along its solution.

mod compose;
mod expectation;
mod propagator;
mod riccati;

pub use compose::{compose_monte_carlo, CompositionEstimate, GaussianProposal};
pub use expectation::{expectation_annihilation, Expectation, PhaseSpaceOptions, PointMixture};
pub use propagator::{dpa_auxiliary, dpa_propagator, quadratic_propagator};
pub use riccati::{solve_riccati, AuxiliaryValues, RiccatiSolution};

use crate::error::{Error, Result};
use crate::numerics::Table1D;
use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

/// A time-dependent coefficient.
#[derive(Clone)]
pub enum Coefficient<V> {
    Constant(V),
    /// Linear interpolation between samples, clamped outside the table.
    Tabulated(Table1D<V>),
    Expression(Arc<dyn Fn(f64) -> V + Send + Sync>),
}

impl<V: fmt::Debug> fmt::Debug for Coefficient<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Constant(v) => write!(f, "Constant({v:?})"),
            Coefficient::Tabulated(_) => write!(f, "Tabulated(..)"),
            Coefficient::Expression(_) => write!(f, "Expression(..)"),
        }
    }
}

impl<V> Coefficient<V>
where
    V: Copy + std::ops::Add<Output = V> + std::ops::Mul<f64, Output = V>,
{
    pub fn expression(f: impl Fn(f64) -> V + Send + Sync + 'static) -> Self {
        Coefficient::Expression(Arc::new(f))
    }

    pub fn at(&self, t: f64) -> V {
        match self {
            Coefficient::Constant(v) => *v,
            Coefficient::Tabulated(table) => table.eval(t),
            Coefficient::Expression(f) => f(t),
        }
    }

    pub fn is_zero(&self) -> bool
    where
        V: PartialEq + Default,
    {
        matches!(self, Coefficient::Constant(v) if *v == V::default())
    }
}

/// ω(t) a†a + [f(t) a² + g(t) a + h.c.]
#[derive(Debug, Clone)]
pub struct QuadraticHamiltonian {
    /// Mode frequency ω(t).
    pub frequency: Coefficient<f64>,
    /// Two-photon (squeezing) coefficient f(t).
    pub pairing: Coefficient<Complex64>,
    /// Linear drive g(t).
    pub drive: Coefficient<Complex64>,
}

impl QuadraticHamiltonian {
    pub fn new(frequency: Coefficient<f64>, pairing: Coefficient<Complex64>, drive: Coefficient<Complex64>) -> Self {
        Self { frequency, pairing, drive }
    }

    /// Free rotation at constant frequency.
    pub fn rotation(omega: f64) -> Self {
        Self::new(Coefficient::Constant(omega), Coefficient::Constant(Complex64::default()), Coefficient::Constant(Complex64::default()))
    }

    /// Degenerate parametric amplifier in the undepleted-pump limit:
    /// ω a†a + κ(e^{2iωt} a² + e^{−2iωt} a†²).
    pub fn degenerate_amplifier(omega: f64, kappa: f64) -> Self {
        Self::new(
            Coefficient::Constant(omega),
            Coefficient::expression(move |t| Complex64::from_polar(kappa, 2.0 * omega * t)),
            Coefficient::Constant(Complex64::default()),
        )
    }

    /// Samples every coefficient on `[t_a, t_b]` and rejects non-finite values.
    pub fn validate(&self, t_a: f64, t_b: f64) -> Result<()> {
        if !t_a.is_finite() || !t_b.is_finite() {
            return Err(Error::Domain("evolution interval must be finite".into()));
        }
        for i in 0..=64 {
            let t = t_a + (t_b - t_a) * i as f64 / 64.0;
            let ok = self.frequency.at(t).is_finite() && self.pairing.at(t).is_finite() && self.drive.at(t).is_finite();
            if !ok {
                return Err(Error::Domain(format!("Hamiltonian coefficient not finite at t = {t}")));
            }
        }
        Ok(())
    }
}

/// A coherent-state label |α⟩ at time t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentLabel {
    pub alpha: Complex64,
    pub time: f64,
}

impl CoherentLabel {
    pub fn new(alpha: Complex64, time: f64) -> Result<Self> {
        if !alpha.is_finite() || !time.is_finite() {
            return Err(Error::InvalidInput(format!("coherent label must be finite, got α = {alpha}, t = {time}")));
        }
        Ok(Self { alpha, time })
    }
}
