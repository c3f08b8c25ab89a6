//! One-dimensional potentials V(x, t).

use crate::numerics::Table1D;
use std::fmt;
use std::sync::Arc;

/// Coefficients (a, b, c) of V(x, t) = a(t) x² + b(t) x + c(t).
pub type QuadraticCoefficients = (f64, f64, f64);

type TimeCoefficients = Arc<dyn Fn(f64) -> QuadraticCoefficients + Send + Sync>;
type PotentialFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A potential tagged with its analytic form.
#[derive(Clone)]
pub enum PotentialModel {
    Free,
    /// V = ½ k x².
    Harmonic { stiffness: f64 },
    /// V = a x² + b x + c with constant coefficients.
    Quadratic { a: f64, b: f64, c: f64 },
    /// V = a(t) x² + b(t) x + c(t).
    QuadraticInTime(TimeCoefficients),
    /// V = height · (x²/x_min² − 1)².
    DoubleWell { height: f64, x_min: f64 },
    /// Piecewise-linear samples of V(x).
    Tabulated(Table1D<f64>),
    /// Arbitrary V(x, t); treated as non-quadratic.
    Custom(PotentialFn),
}

impl fmt::Debug for PotentialModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialModel::Free => write!(f, "Free"),
            PotentialModel::Harmonic { stiffness } => write!(f, "Harmonic {{ stiffness: {stiffness} }}"),
            PotentialModel::Quadratic { a, b, c } => write!(f, "Quadratic {{ a: {a}, b: {b}, c: {c} }}"),
            PotentialModel::QuadraticInTime(_) => write!(f, "QuadraticInTime(..)"),
            PotentialModel::DoubleWell { height, x_min } => write!(f, "DoubleWell {{ height: {height}, x_min: {x_min} }}"),
            PotentialModel::Tabulated(t) => write!(f, "Tabulated({} points)", t.abscissae().len()),
            PotentialModel::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl PotentialModel {
    /// ½ m ω² x².
    pub fn harmonic(mass: f64, omega: f64) -> Self {
        PotentialModel::Harmonic { stiffness: mass * omega * omega }
    }

    pub fn value(&self, x: f64, t: f64) -> f64 {
        match self {
            PotentialModel::Free => 0.0,
            PotentialModel::Harmonic { stiffness } => 0.5 * stiffness * x * x,
            PotentialModel::Quadratic { a, b, c } => (a * x + b) * x + c,
            PotentialModel::QuadraticInTime(f) => {
                let (a, b, c) = f(t);
                (a * x + b) * x + c
            }
            PotentialModel::DoubleWell { height, x_min } => {
                let u = x * x / (x_min * x_min) - 1.0;
                height * u * u
            }
            PotentialModel::Tabulated(table) => table.eval(x),
            PotentialModel::Custom(f) => f(x, t),
        }
    }

    /// ∂V/∂x; analytic where the form is known, central difference otherwise.
    pub fn derivative(&self, x: f64, t: f64) -> f64 {
        match self {
            PotentialModel::Free => 0.0,
            PotentialModel::Harmonic { stiffness } => stiffness * x,
            PotentialModel::Quadratic { a, b, .. } => 2.0 * a * x + b,
            PotentialModel::QuadraticInTime(f) => {
                let (a, b, _) = f(t);
                2.0 * a * x + b
            }
            PotentialModel::DoubleWell { height, x_min } => {
                let x2 = x_min * x_min;
                4.0 * height * x * (x * x / x2 - 1.0) / x2
            }
            _ => {
                let h = 1e-5 * x.abs().max(1.0);
                (self.value(x + h, t) - self.value(x - h, t)) / (2.0 * h)
            }
        }
    }

    /// Quadratic coefficients at time `t`, if the potential is quadratic in x.
    pub fn quadratic_coefficients(&self, t: f64) -> Option<QuadraticCoefficients> {
        match self {
            PotentialModel::Free => Some((0.0, 0.0, 0.0)),
            PotentialModel::Harmonic { stiffness } => Some((0.5 * stiffness, 0.0, 0.0)),
            PotentialModel::Quadratic { a, b, c } => Some((*a, *b, *c)),
            PotentialModel::QuadraticInTime(f) => Some(f(t)),
            _ => None,
        }
    }

    pub fn is_quadratic(&self) -> bool {
        self.quadratic_coefficients(0.0).is_some()
    }

    pub fn is_time_dependent(&self) -> bool {
        matches!(self, PotentialModel::QuadraticInTime(_) | PotentialModel::Custom(_))
    }
}
