//! Imaginary-time path integral Monte Carlo for one distinguishable particle
//! in one dimension (ħ = k_B = 1).
//!
//! A thermal particle is a closed ring of M beads separated by Δτ = 1/(M T),
//! sampled with weight e^{−S} under the primitive action.

mod blocking;
mod config;
mod moves;
mod polarizability;
mod run;

pub use blocking::{blocking_analysis, BlockingLevel, BlockingReport};
pub use config::{parse_run_config, PimcInput};
pub use moves::{metropolis_sweep, MoveSet, SweepStats};
pub use polarizability::{polarizability_finite_field, FieldPoint, Polarizability};
pub use run::{estimate, run_chains, ChainOutput, EstimatorResult, Observable, RunConfig, RunOutput};

use crate::error::{Error, Result};
use crate::potential::PotentialModel;

/// Closed imaginary-time path; bead M+1 is bead 1.
#[derive(Debug, Clone, PartialEq)]
pub struct RingPolymer {
    beads: Vec<f64>,
    temperature: f64,
}

impl RingPolymer {
    /// All beads at `x0`.
    pub fn new(beads: usize, temperature: f64, x0: f64) -> Result<Self> {
        Self::from_positions(vec![x0; beads], temperature)
    }

    pub fn from_positions(positions: Vec<f64>, temperature: f64) -> Result<Self> {
        if positions.len() < 2 {
            return Err(Error::InvalidInput(format!("ring polymer needs at least 2 beads, got {}", positions.len())));
        }
        if !(temperature > 0.0) || !temperature.is_finite() {
            return Err(Error::Domain(format!("temperature must be positive, got {temperature}")));
        }
        if positions.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("bead positions must be finite".into()));
        }
        Ok(Self { beads: positions, temperature })
    }

    pub fn len(&self) -> usize {
        self.beads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beads.is_empty()
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    /// Δτ = 1/(M T).
    pub fn tau_step(&self) -> f64 {
        1.0 / (self.beads.len() as f64 * self.temperature)
    }

    pub fn positions(&self) -> &[f64] {
        &self.beads
    }

    pub(crate) fn positions_mut(&mut self) -> &mut [f64] {
        &mut self.beads
    }

    pub fn centroid(&self) -> f64 {
        self.beads.iter().sum::<f64>() / self.beads.len() as f64
    }

    /// Bead k with periodic closure.
    pub fn bead(&self, k: isize) -> f64 {
        let m = self.beads.len() as isize;
        self.beads[k.rem_euclid(m) as usize]
    }
}

/// Particle of mass m in V(x) − qEx at temperature T.
#[derive(Debug, Clone)]
pub struct ThermalSystem {
    pub mass: f64,
    pub potential: PotentialModel,
    pub temperature: f64,
    pub charge: f64,
    pub field: f64,
}

impl ThermalSystem {
    pub fn new(mass: f64, potential: PotentialModel, temperature: f64) -> Result<Self> {
        let sys = Self { mass, potential, temperature, charge: 0.0, field: 0.0 };
        sys.validate()?;
        Ok(sys)
    }

    pub fn harmonic(mass: f64, omega: f64, temperature: f64) -> Result<Self> {
        Self::new(mass, PotentialModel::harmonic(mass, omega), temperature)
    }

    pub fn with_field(mut self, charge: f64, field: f64) -> Result<Self> {
        self.charge = charge;
        self.field = field;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass > 0.0) {
            return Err(Error::Domain(format!("mass must be positive, got {}", self.mass)));
        }
        if !(self.temperature > 0.0) || !self.temperature.is_finite() {
            return Err(Error::Domain(format!("temperature must be positive, got {}", self.temperature)));
        }
        if !self.charge.is_finite() || !self.field.is_finite() {
            return Err(Error::InvalidInput("charge and field must be finite".into()));
        }
        let confining = match &self.potential {
            PotentialModel::Harmonic { stiffness } => *stiffness > 0.0,
            PotentialModel::Quadratic { a, .. } => *a > 0.0,
            PotentialModel::DoubleWell { height, x_min } => *height >= 0.0 && *x_min != 0.0,
            PotentialModel::Tabulated(_) | PotentialModel::Custom(_) => true,
            PotentialModel::Free | PotentialModel::QuadraticInTime(_) => false,
        };
        if !confining {
            return Err(Error::Domain(format!("potential must be time independent and bounded below, got {:?}", self.potential)));
        }
        // A tabulated potential is clamped outside its range, so a linear
        // field term would make it unbounded below.
        if matches!(self.potential, PotentialModel::Tabulated(_)) && self.charge * self.field != 0.0 {
            return Err(Error::Domain("a field on a tabulated potential is unbounded below".into()));
        }
        Ok(())
    }

    /// U(x) = V(x) − qEx.
    #[inline]
    pub fn energy(&self, x: f64) -> f64 {
        self.potential.value(x, 0.0) - self.charge * self.field * x
    }

    #[inline]
    pub fn energy_derivative(&self, x: f64) -> f64 {
        self.potential.derivative(x, 0.0) - self.charge * self.field
    }
}

/// S = Σ_k [m(x_{k+1} − x_k)²/(2Δτ) + Δτ U(x_k)] with periodic closure.
pub fn primitive_action(poly: &RingPolymer, sys: &ThermalSystem) -> f64 {
    let dtau = poly.tau_step();
    let x = poly.positions();
    let m = x.len();
    let mut spring = 0.0;
    let mut pot = 0.0;
    for k in 0..m {
        let d = x[(k + 1) % m] - x[k];
        spring += d * d;
        pot += sys.energy(x[k]);
    }
    0.5 * sys.mass * spring / dtau + dtau * pot
}
