//! Spontaneous emission of an aligned dipole in a homogeneous absorbing dielectric.

use crate::error::{Error, Result};
use crate::numerics::integrate_adaptive;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Dielectric ε = ε₁ + iε₂ at the transition frequency ω₀ and the vacuum rate Γ₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmitterEnvironment {
    pub eps_real: f64,
    pub eps_imag: f64,
    pub vacuum_rate: f64,
    pub transition_frequency: f64,
}

impl EmitterEnvironment {
    pub fn new(eps_real: f64, eps_imag: f64, vacuum_rate: f64, transition_frequency: f64) -> Result<Self> {
        let env = Self { eps_real, eps_imag, vacuum_rate, transition_frequency };
        env.validate()?;
        Ok(env)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.eps_real.is_finite() || !(self.eps_imag >= 0.0) || !self.eps_imag.is_finite() {
            return Err(Error::Domain(format!("need finite ε₁ and ε₂ ≥ 0, got {} + {}i", self.eps_real, self.eps_imag)));
        }
        if !(self.vacuum_rate > 0.0) || !self.vacuum_rate.is_finite() {
            return Err(Error::Domain(format!("vacuum rate must be positive, got {}", self.vacuum_rate)));
        }
        if !(self.transition_frequency > 0.0) || !self.transition_frequency.is_finite() {
            return Err(Error::Domain(format!("transition frequency must be positive, got {}", self.transition_frequency)));
        }
        Ok(())
    }

    pub fn permittivity(&self) -> Complex64 {
        Complex64::new(self.eps_real, self.eps_imag)
    }

    /// Re √ε on the principal branch.
    fn index_real(&self) -> f64 {
        self.permittivity().sqrt().re
    }
}

/// Γ = Γ₀ Re √(ε₁ + iε₂).
pub fn spontaneous_rate(env: &EmitterEnvironment) -> Result<f64> {
    env.validate()?;
    Ok(env.vacuum_rate * env.index_real())
}

/// Im G_zz(0, ω₀) = (ω₀/4π) Re √(ε₁ + iε₂).
pub fn imag_green_loop(env: &EmitterEnvironment) -> Result<f64> {
    env.validate()?;
    Ok(env.transition_frequency / (4.0 * PI) * env.index_real())
}

/// Outcome of the momentum-space evaluation of Im G_zz(0, ω₀).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KQuadrature {
    pub value: f64,
    /// Unextrapolated values at cutoffs K and 2K.
    pub at_cutoff: f64,
    pub at_double_cutoff: f64,
    pub cutoff: f64,
}

/// Im G_zz(0, ω₀) from the radial momentum integral
/// (1/2π²) ∫₀^K Im[a²/(k² − a²)] dk, a² = ω₀²ε,
/// with the O(1/K) cutoff error removed by Richardson extrapolation in K → 2K.
/// Needs ε₂ > 0 so that the pole sits off the real axis.
pub fn imag_green_k_quadrature(env: &EmitterEnvironment, cutoff_multiple: f64) -> Result<KQuadrature> {
    env.validate()?;
    if !(env.eps_imag > 0.0) {
        return Err(Error::Domain("momentum quadrature needs ε₂ > 0".into()));
    }
    if !(cutoff_multiple >= 10.0) {
        return Err(Error::Domain(format!("cutoff multiple must be at least 10, got {cutoff_multiple}")));
    }
    let a2 = env.transition_frequency * env.transition_frequency * env.permittivity();
    let a = a2.sqrt();
    let cutoff = cutoff_multiple * a.norm();
    let integrand = |k: f64| (a2 / (k * k - a2)).im;
    let integral = |upper: f64| -> Result<f64> {
        let mut breaks = vec![0.0];
        for off in [-20.0, -3.0, 0.0, 3.0, 20.0] {
            let p = a.re + off * a.im;
            if p > 0.0 && p < upper {
                breaks.push(p);
            }
        }
        breaks.push(upper);
        breaks.sort_by(|x, y| x.partial_cmp(y).unwrap());
        breaks.dedup();
        let mut total = 0.0;
        for w in breaks.windows(2) {
            let r = integrate_adaptive(integrand, w[0], w[1], 1e-14, 1e-12, 5000)
                .ok_or_else(|| Error::Tolerance("momentum quadrature did not converge".into()))?;
            total += r.value;
        }
        Ok(total / (2.0 * PI * PI))
    };
    let at_cutoff = integral(cutoff)?;
    let at_double_cutoff = integral(2.0 * cutoff)?;
    Ok(KQuadrature { value: 2.0 * at_double_cutoff - at_cutoff, at_cutoff, at_double_cutoff, cutoff })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_values() {
        let env = EmitterEnvironment::new(1.0, 0.0, 2.0, 1.0).unwrap();
        assert!((spontaneous_rate(&env).unwrap() - 2.0).abs() < 1e-15);
        assert!((imag_green_loop(&env).unwrap() - 0.079577).abs() < 1e-6);
    }

    #[test]
    fn rejects_gain_and_bad_rate() {
        assert!(EmitterEnvironment::new(1.0, -0.1, 1.0, 1.0).is_err());
        assert!(EmitterEnvironment::new(1.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn lossless_quadrature_refused() {
        let env = EmitterEnvironment::new(2.0, 0.0, 1.0, 1.0).unwrap();
        assert!(imag_green_k_quadrature(&env, 100.0).is_err());
    }
}
