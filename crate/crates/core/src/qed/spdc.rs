//! Lossy one-dimensional medium, its Green's function and pair generation.

use crate::error::{Error, Result};
use crate::numerics::{integrate_adaptive, Table1D};
use crate::scalar::{lit, sinc, Real};
use num_complex::{Complex, Complex64};
use std::fmt;
use std::sync::Arc;

/// G(x − y, ω) = e^{iκ|x − y|}/(2iκ) for complex wavevector κ = k + iγ.
pub fn green_1d<T: Real>(x: T, y: T, kappa: Complex<T>) -> Result<Complex<T>> {
    if kappa.norm_sqr() == T::zero() {
        return Err(Error::Domain("Green's function needs a nonzero wavevector".into()));
    }
    if !(kappa.re.is_finite() && kappa.im.is_finite()) || kappa.im < T::zero() {
        return Err(Error::Domain(format!("wavevector must be finite with Im κ ≥ 0, got {kappa}")));
    }
    let i = Complex::new(T::zero(), T::one());
    let two = lit::<T>(2.0);
    Ok((i * kappa * (x - y).abs()).exp() / (i * kappa * two))
}

/// sinh(x)/x.
fn sinhc<T: Real>(x: T) -> T {
    if x.abs() < lit(1e-4) {
        let x2 = x * x;
        T::one() + x2 / lit(6.0) + x2 * x2 / lit(120.0)
    } else {
        x.sinh() / x
    }
}

/// Pair-detection probability in a lossy medium of length L (P₀ = 1):
///
/// P = −2e^{−ΓL}[cos(ΔkL) − cosh(ΓL)] / (L²(Δk² + Γ²)).
///
/// Evaluated through cosh a − cos b = 2sinh²(a/2) + 2sin²(b/2), which makes
/// it a weighted mean of sinh²(a/2)/(a/2)² and sinc²(b/2); the removable
/// singularity at Δk = Γ = 0 then needs no special case beyond the series
/// inside sinc and sinhc.
pub fn spdc_probability<T: Real>(delta_k: T, gamma: T, length: T) -> Result<T> {
    if !(length > T::zero()) || !length.is_finite() {
        return Err(Error::Domain(format!("medium length must be positive, got {length}")));
    }
    if !(gamma >= T::zero()) || !gamma.is_finite() || !delta_k.is_finite() {
        return Err(Error::Domain(format!("need finite Δk and Γ ≥ 0, got Δk = {delta_k}, Γ = {gamma}")));
    }
    let half = lit::<T>(0.5);
    let a = gamma * length;
    let b = delta_k * length;
    let (a2, b2) = (a * a, b * b);
    let weighted = if a2 + b2 == T::zero() {
        T::one()
    } else {
        let sh = sinhc(half * a);
        let s = sinc(half * b);
        (a2 * sh * sh + b2 * s * s) / (a2 + b2)
    };
    Ok((-a).exp() * weighted)
}

/// Complex wavevector κ(ω) = k(ω) + iγ(ω).
#[derive(Clone)]
pub enum Wavevector {
    /// Linear interpolation between (ω, κ) samples.
    Tabulated(Table1D<Complex64>),
    Function(Arc<dyn Fn(f64) -> Complex64 + Send + Sync>),
}

impl fmt::Debug for Wavevector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Wavevector::Tabulated(t) => write!(f, "Tabulated({:?})", t.abscissae()),
            Wavevector::Function(_) => write!(f, "Function(..)"),
        }
    }
}

impl Wavevector {
    pub fn at(&self, omega: f64) -> Complex64 {
        match self {
            Wavevector::Tabulated(t) => t.eval(omega),
            Wavevector::Function(f) => f(omega),
        }
    }
}

/// Homogeneous χ⁽²⁾ slab on [0, L] pumped by a plane wave at ω_p.
#[derive(Debug, Clone)]
pub struct DispersiveMedium1D {
    pub wavevector: Wavevector,
    pub length: f64,
    pub omega_pump: f64,
    pub omega_signal: f64,
    pub omega_idler: f64,
}

impl DispersiveMedium1D {
    pub fn new(wavevector: Wavevector, length: f64, omega_pump: f64, omega_signal: f64, omega_idler: f64) -> Result<Self> {
        let m = Self { wavevector, length, omega_pump, omega_signal, omega_idler };
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::Domain(format!("medium length must be positive, got {length}")));
        }
        for w in [omega_pump, omega_signal, omega_idler] {
            let k = m.wavevector.at(w);
            if !k.is_finite() || k.im < 0.0 {
                return Err(Error::Domain(format!("κ({w}) = {k} is not a passive (Im κ ≥ 0) finite wavevector")));
            }
            if k.norm_sqr() == 0.0 {
                return Err(Error::Domain(format!("κ({w}) vanishes")));
            }
        }
        Ok(m)
    }

    /// A medium with prescribed mismatch and losses: signal at ω = 1 with
    /// k = 10, idler at ω = 1.5 with k = 15, pump at ω = 2.5 with k = 25 + Δk,
    /// linearly interpolated in between.
    pub fn with_mismatch(delta_k: f64, gamma_signal: f64, gamma_idler: f64, length: f64) -> Result<Self> {
        let table = Table1D::new(
            vec![1.0, 1.5, 2.5],
            vec![Complex64::new(10.0, gamma_signal), Complex64::new(15.0, gamma_idler), Complex64::new(25.0 + delta_k, 0.0)],
        )?;
        Self::new(Wavevector::Tabulated(table), length, 2.5, 1.0, 1.5)
    }

    /// Δk = k(ω_p) − k(ω_s) − k(ω_i).
    pub fn mismatch(&self) -> f64 {
        self.wavevector.at(self.omega_pump).re - self.wavevector.at(self.omega_signal).re - self.wavevector.at(self.omega_idler).re
    }

    /// Γ = γ(ω_s) + γ(ω_i).
    pub fn loss(&self) -> f64 {
        self.wavevector.at(self.omega_signal).im + self.wavevector.at(self.omega_idler).im
    }

    pub fn green(&self, x: f64, y: f64, omega: f64) -> Result<Complex64> {
        green_1d(x, y, self.wavevector.at(omega))
    }
}

/// ∫₀^L χA_p e^{ik_p z} G(x − z, ω_s) G(z − y, ω_i) dz by adaptive Gauss–Kronrod,
/// with the pump wavenumber k_p = Re κ(ω_p).
///
/// Detectors must sit outside the slab on the exit side (x, y ≥ L); the
/// medium's Green's function is used along the whole line.
pub fn biphoton_amplitude_numeric(x: f64, y: f64, medium: &DispersiveMedium1D, pump_amplitude: Complex64, chi: f64) -> Result<Complex64> {
    let l = medium.length;
    if x < l || y < l {
        return Err(Error::Domain(format!("detectors must be at or beyond the exit face L = {l}, got x = {x}, y = {y}")));
    }
    if chi == 0.0 || pump_amplitude == Complex64::default() {
        return Ok(Complex64::default());
    }
    let k_p = medium.wavevector.at(medium.omega_pump).re;
    let kappa_s = medium.wavevector.at(medium.omega_signal);
    let kappa_i = medium.wavevector.at(medium.omega_idler);
    green_1d(0.0, 1.0, kappa_s)?;
    green_1d(0.0, 1.0, kappa_i)?;
    let integrand = |z: f64| {
        let pump = Complex64::from_polar(1.0, k_p * z);
        // κ validated above, so the Green's functions cannot fail here
        let gs = green_1d(x, z, kappa_s).unwrap_or_default();
        let gi = green_1d(z, y, kappa_i).unwrap_or_default();
        pump * gs * gi
    };
    let scale = 1.0 / (4.0 * kappa_s.norm() * kappa_i.norm());
    let r = integrate_adaptive(integrand, 0.0, l, 1e-15 * scale * l, 1e-13, 4000)
        .ok_or_else(|| Error::Tolerance("biphoton vertex quadrature did not converge".into()))?;
    Ok(chi * pump_amplitude * r.value)
}

/// |amplitude|² at the exit face normalised by its lossless, phase-matched
/// value L|χA_p|/(4|κ_s κ_i|), i.e. P₀ absorbs the coupling and the
/// Green's-function prefactors.
pub fn biphoton_probability_numeric(medium: &DispersiveMedium1D) -> Result<f64> {
    let l = medium.length;
    let amp = biphoton_amplitude_numeric(l, l, medium, Complex64::new(1.0, 0.0), 1.0)?;
    let kappa_s = medium.wavevector.at(medium.omega_signal);
    let kappa_i = medium.wavevector.at(medium.omega_idler);
    let reference = l / (4.0 * kappa_s.norm() * kappa_i.norm());
    Ok((amp.norm() / reference).powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coincidence_limit() {
        let k = Complex64::new(2.0, 0.3);
        let g = green_1d(0.4, 0.4, k).unwrap();
        assert!((g - 1.0 / (Complex64::new(0.0, 2.0) * k)).norm() < 1e-15);
        assert!(green_1d(0.0, 1.0, Complex64::default()).is_err());
        assert!(green_1d(0.0, 1.0, Complex64::new(1.0, -0.1)).is_err());
    }

    #[test]
    fn lossless_limit_is_sinc_squared() {
        for dk in [0.0f64, 0.3, 1.0, 4.0, -7.5] {
            let p = spdc_probability(dk, 0.0, 1.3).unwrap();
            let s = sinc(dk * 1.3 / 2.0);
            assert!((p - s * s).abs() < 1e-15);
        }
    }

    #[test]
    fn phase_matched_unit_loss() {
        let p = spdc_probability(0.0, 1.0, 1.0).unwrap();
        let e = (-1.0f64).exp();
        assert!((p - (1.0 - e) * (1.0 - e)).abs() < 1e-15);
        assert!((p - 0.39958).abs() < 1e-5);
    }

    #[test]
    fn printed_form_agrees_away_from_singularity() {
        for (dk, g, l) in [(3.0f64, 0.5f64, 1.0f64), (10.0, 1.0, 0.7), (-2.0, 2.0, 1.5)] {
            let printed: f64 = -2.0 * (-g * l).exp() * ((dk * l).cos() - (g * l).cosh()) / (l * l * (dk * dk + g * g));
            assert!((spdc_probability(dk, g, l).unwrap() - printed).abs() < 1e-14);
        }
    }

    #[test]
    fn single_precision() {
        let p = spdc_probability(0.0f32, 1.0, 1.0).unwrap();
        assert!((p - 0.39958).abs() < 1e-5);
    }
}
