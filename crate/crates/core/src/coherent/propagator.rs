//! Propagator assembly and the parametric-amplifier closed form.

use super::riccati::RiccatiSolution;
use super::CoherentLabel;
use crate::error::{Error, Result};
use num_complex::Complex64;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// K(α_b, t_b; α_a, t_a) = F · e^{−iΣ} with
/// F = exp[−(|α_b|² + |α_a|²)/2 + Y α_b* α_a + X α_b*² + Z α_b*].
///
/// `from.time` must be the start of `solution`; `to.time` may be any time
/// inside its span.
pub fn quadratic_propagator(from: &CoherentLabel, to: &CoherentLabel, solution: &RiccatiSolution) -> Result<Complex64> {
    let (t_a, _) = solution.span();
    if (from.time - t_a).abs() > 1e-12 * (1.0 + t_a.abs()) {
        return Err(Error::InvalidInput(format!("initial label time {} does not match the solution start {t_a}", from.time)));
    }
    if !solution.contains(to.time) {
        return Err(Error::InvalidInput(format!("final label time {} outside the solved interval", to.time)));
    }
    let aux = solution.at(to.time);
    let (a, b) = (from.alpha, to.alpha.conj());
    let exponent = -0.5 * (from.alpha.norm_sqr() + to.alpha.norm_sqr())
        + aux.transfer * b * a
        + aux.pair * b * b
        + aux.displacement * b
        - I * aux.phase_integral(a);
    Ok(exponent.exp())
}

/// Closed-form (X(t), Y(t)) for the degenerate parametric amplifier.
pub fn dpa_auxiliary(t: f64, t_a: f64, omega: f64, kappa: f64) -> (Complex64, Complex64) {
    let s = 2.0 * kappa * (t - t_a);
    let pair = Complex64::from_polar(0.5, -2.0 * omega * t - std::f64::consts::FRAC_PI_2) * s.tanh();
    let transfer = Complex64::from_polar(1.0 / s.cosh(), -omega * (t - t_a));
    (pair, transfer)
}

/// Degenerate parametric amplifier propagator in closed form.
///
/// The cross-term phase is e^{−iω(t_b − t_a)}.
pub fn dpa_propagator(from: &CoherentLabel, to: &CoherentLabel, omega: f64, kappa: f64) -> Complex64 {
    let (t_a, t_b) = (from.time, to.time);
    let s = 2.0 * kappa * (t_b - t_a);
    let sech = 1.0 / s.cosh();
    let tanh = s.tanh();
    let (a, b) = (from.alpha, to.alpha.conj());
    let exponent = -0.5 * (from.alpha.norm_sqr() + to.alpha.norm_sqr())
        + b * a * Complex64::from_polar(sech, -omega * (t_b - t_a))
        - I * 0.5 * b * b * Complex64::from_polar(tanh, -2.0 * omega * t_b)
        - I * 0.5 * a * a * Complex64::from_polar(tanh, 2.0 * omega * t_a);
    sech.sqrt() * exponent.exp()
}
