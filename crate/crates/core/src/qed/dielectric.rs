//! Effective dielectric function of a polarizable medium coupled to a reservoir.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

/// Reservoir response λ_F(Ω) entering the denominator ω₀² − Ω²[1 + λ_F(Ω)].
#[derive(Clone, Default)]
pub enum ReservoirResponse {
    /// λ_F ≡ 0: undamped oscillators.
    #[default]
    None,
    /// Ω²λ_F = iγΩ, i.e. the Lorentz oscillator ω₀² − Ω² − iγΩ.
    LorentzDamping { gamma: f64 },
    Custom(Arc<dyn Fn(f64) -> Complex64 + Send + Sync>),
}

impl fmt::Debug for ReservoirResponse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReservoirResponse::None => write!(f, "None"),
            ReservoirResponse::LorentzDamping { gamma } => write!(f, "LorentzDamping {{ gamma: {gamma} }}"),
            ReservoirResponse::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl ReservoirResponse {
    /// Ω²[1 + λ_F(Ω)].
    fn dressed_square(&self, omega: f64) -> Complex64 {
        let w2 = omega * omega;
        match self {
            ReservoirResponse::None => Complex64::new(w2, 0.0),
            ReservoirResponse::LorentzDamping { gamma } => Complex64::new(w2, gamma * omega),
            ReservoirResponse::Custom(f) => w2 * (1.0 + f(omega)),
        }
    }
}

/// Resonance ω₀, static polarizability β, shape factor g ∈ {0, 1} (1 inside
/// the medium) and vacuum permittivity ε₀.
#[derive(Debug, Clone)]
pub struct EffectiveDielectricModel {
    pub resonance: f64,
    pub polarizability: f64,
    pub shape: f64,
    pub vacuum_permittivity: f64,
    pub reservoir: ReservoirResponse,
}

impl EffectiveDielectricModel {
    pub fn new(resonance: f64, polarizability: f64, shape: f64, vacuum_permittivity: f64, reservoir: ReservoirResponse) -> Result<Self> {
        let m = Self { resonance, polarizability, shape, vacuum_permittivity, reservoir };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.resonance > 0.0) || !self.resonance.is_finite() {
            return Err(Error::Domain(format!("resonance must be positive, got {}", self.resonance)));
        }
        if !(self.polarizability >= 0.0) || !self.polarizability.is_finite() {
            return Err(Error::Domain(format!("polarizability must be non-negative, got {}", self.polarizability)));
        }
        if self.shape != 0.0 && self.shape != 1.0 {
            return Err(Error::Domain(format!("shape factor must be 0 or 1, got {}", self.shape)));
        }
        if !(self.vacuum_permittivity > 0.0) || !self.vacuum_permittivity.is_finite() {
            return Err(Error::Domain(format!("vacuum permittivity must be positive, got {}", self.vacuum_permittivity)));
        }
        if let ReservoirResponse::LorentzDamping { gamma } = self.reservoir {
            if !(gamma >= 0.0) || !gamma.is_finite() {
                return Err(Error::Domain(format!("damping must be non-negative, got {gamma}")));
            }
        }
        Ok(())
    }

    /// Γ̃(Ω) = ε₀ω₀²β / (ω₀² − Ω²[1 + λ_F(Ω)]).
    pub fn response(&self, omega: f64) -> Result<Complex64> {
        let w02 = self.resonance * self.resonance;
        let den = w02 - self.reservoir.dressed_square(omega);
        if !den.is_finite() {
            return Err(Error::Domain(format!("reservoir response not finite at Ω = {omega}")));
        }
        if den.norm() < 1e-12 * w02 {
            return Err(Error::Pole(format!("Ω = {omega} sits on the resonance ω₀ = {}", self.resonance)));
        }
        Ok(self.vacuum_permittivity * w02 * self.polarizability / den)
    }
}

/// ε(Ω) = 1 + g Γ̃(Ω)/ε₀.
pub fn effective_dielectric(omega: f64, model: &EffectiveDielectricModel) -> Result<Complex64> {
    model.validate()?;
    if model.shape == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(1.0 + model.shape * model.response(omega)? / model.vacuum_permittivity)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn static_limit() {
        let m = EffectiveDielectricModel::new(2.0, 0.7, 1.0, 8.854e-12, ReservoirResponse::LorentzDamping { gamma: 0.3 }).unwrap();
        let e = effective_dielectric(0.0, &m).unwrap();
        assert!((e - Complex64::new(1.7, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn undamped_resonance_is_a_pole() {
        let m = EffectiveDielectricModel::new(2.0, 0.7, 1.0, 1.0, ReservoirResponse::None).unwrap();
        assert!(matches!(effective_dielectric(2.0, &m), Err(Error::Pole(_))));
        assert!(effective_dielectric(2.0 + 1e-6, &m).is_ok());
    }

    #[test]
    fn lorentz_absorbs() {
        let m = EffectiveDielectricModel::new(1.0, 0.5, 1.0, 1.0, ReservoirResponse::LorentzDamping { gamma: 0.1 }).unwrap();
        for w in [0.2, 0.9, 1.0, 1.1, 3.0] {
            assert!(effective_dielectric(w, &m).unwrap().im > 0.0);
        }
    }

    #[test]
    fn shape_factor_restricted() {
        assert!(EffectiveDielectricModel::new(1.0, 0.5, 0.5, 1.0, ReservoirResponse::None).is_err());
    }
}
