//! Hermite–Gauss eigenfunctions of the z-dependent oscillator and the
//! Mehler-resummed kernel K = Σ ψ_n*(x_a, z_a) ψ_n(x_b, z_b).

use super::envelope::{EnvelopeSolution, EnvelopeState};
use super::GrinMedium;
use crate::error::{Error, Result};
use crate::numerics::{hermite_functions, wynn_epsilon};
use num_complex::Complex64;

// relative tail size below which a mode sum counts as converged
const MODE_SUM_TOL: f64 = 1e-8;

/// ψ_0 … ψ_{n_max} at transverse position `x` on the plane described by `state`.
///
/// ψ_n = (n₀γ̇/λbar)^{1/4} φ_n(X) e^{−i(n+½)γ} e^{i n₀ ṡ x² / (2λbar s)},
/// X = x √(n₀γ̇/λbar), φ_n the normalized Hermite functions.
pub fn mode_functions(n_max: usize, x: f64, state: &EnvelopeState, medium: &GrinMedium) -> Vec<Complex64> {
    let lb = medium.lambda_bar();
    let scale = medium.n0 * state.gamma_dot / lb;
    let big_x = x * scale.sqrt();
    let amp = scale.powf(0.25);
    let chirp = Complex64::from_polar(1.0, medium.n0 * state.s_dot * x * x / (2.0 * lb * state.s));
    hermite_functions(n_max, big_x)
        .into_iter()
        .enumerate()
        .map(|(n, h)| Complex64::from_polar(amp * h, -(n as f64 + 0.5) * state.gamma) * chirp)
        .collect()
}

/// Outcome of a truncated mode sum.
#[derive(Debug, Clone, Copy)]
pub struct ModeSum {
    /// Wynn-ε limit of the paired partial sums S₁, S₃, S₅, …, times the carrier.
    pub value: Complex64,
    /// Plain partial sum through n = N_max, times the carrier.
    pub partial_sum: Complex64,
    pub estimated_error: f64,
    /// `estimated_error / |value|` is below 1e-8.
    pub converged: bool,
}

/// K(x_b, z_b; x_a, z_a) from the first N_max + 1 modes, including the axial
/// carrier e^{ikn₀(z_b − z_a)} so it compares directly with the ray kernel.
///
/// At real Mehler argument |e^{−iφ}| = 1 the series converges only
/// conditionally, so the raw truncation is poor; odd terms vanish at x = 0,
/// hence the extrapolation runs over every second partial sum.
pub fn mode_kernel(
    x_a: f64,
    x_b: f64,
    z_a: f64,
    z_b: f64,
    envelope: &EnvelopeSolution,
    medium: &GrinMedium,
    n_max: usize,
) -> Result<ModeSum> {
    if n_max == 0 {
        return Err(Error::InvalidInput("mode sum needs N_max >= 1".into()));
    }
    let a = mode_functions(n_max, x_a, &envelope.at(z_a)?, medium);
    let b = mode_functions(n_max, x_b, &envelope.at(z_b)?, medium);
    let mut partial = Vec::with_capacity(n_max + 1);
    let mut acc = Complex64::new(0.0, 0.0);
    for (pa, pb) in a.iter().zip(&b) {
        acc += pa.conj() * pb;
        partial.push(acc);
    }
    let paired: Vec<Complex64> = partial.iter().skip(1).step_by(2).copied().collect();
    let ext = wynn_epsilon(&paired);
    let carrier = medium.carrier(z_b - z_a);
    let value = ext.value * carrier;
    let converged = ext.error <= MODE_SUM_TOL * value.norm();
    Ok(ModeSum { value, partial_sum: acc * carrier, estimated_error: ext.error, converged })
}
