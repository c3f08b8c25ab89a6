//! Closed-form propagators: free particle, harmonic oscillator, refraction.
//!
//! These are the reference values every numerical route is compared with.
//! All formulas are generic over the scalar type.

use crate::error::{Error, Result};
use crate::scalar::{lit, sinc, Real};
use num_complex::Complex;

/// Mass and reduced Planck constant of the particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleParams<T> {
    pub mass: T,
    pub hbar: T,
}

impl<T: Real> ParticleParams<T> {
    pub fn new(mass: T, hbar: T) -> Result<Self> {
        if !(mass > T::zero()) || !(hbar > T::zero()) {
            return Err(Error::Domain(format!("mass and hbar must be positive (m={mass}, hbar={hbar})")));
        }
        Ok(Self { mass, hbar })
    }
}

impl<T: Real> Default for ParticleParams<T> {
    fn default() -> Self {
        Self { mass: T::one(), hbar: T::one() }
    }
}

/// Initial and final spacetime points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimeEndpoints<T> {
    pub x_a: T,
    pub x_b: T,
    pub t_a: T,
    pub t_b: T,
}

impl<T: Real> SpacetimeEndpoints<T> {
    pub fn new(x_a: T, x_b: T, t_a: T, t_b: T) -> Self {
        Self { x_a, x_b, t_a, t_b }
    }

    /// Endpoints starting at t = 0 and lasting `duration`.
    pub fn over(x_a: T, x_b: T, duration: T) -> Self {
        Self { x_a, x_b, t_a: T::zero(), t_b: duration }
    }

    pub fn duration(&self) -> T {
        self.t_b - self.t_a
    }

    /// The same endpoints traversed backwards in time: (x_a, t_a) ↔ (x_b, t_b).
    pub fn swapped(&self) -> Self {
        Self { x_a: self.x_b, x_b: self.x_a, t_a: self.t_b, t_b: self.t_a }
    }

    fn checked_duration(&self) -> Result<T> {
        let t = self.duration();
        if !(t > T::zero()) {
            return Err(Error::Domain(format!("elapsed time must be positive, got {t}")));
        }
        Ok(t)
    }
}

/// Harmonic oscillator: particle plus angular frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams<T> {
    pub particle: ParticleParams<T>,
    pub omega: T,
}

impl<T: Real> OscillatorParams<T> {
    pub fn new(particle: ParticleParams<T>, omega: T) -> Result<Self> {
        if !(omega >= T::zero()) {
            return Err(Error::Domain(format!("omega must be non-negative, got {omega}")));
        }
        Ok(Self { particle, omega })
    }
}

fn two_pi<T: Real>() -> T {
    T::PI() + T::PI()
}

/// √(m / (2πiħT)) · exp(i m (x_b − x_a)² / (2ħT)).
pub fn free_kernel<T: Real>(ends: &SpacetimeEndpoints<T>, p: &ParticleParams<T>) -> Result<Complex<T>> {
    let t = ends.checked_duration()?;
    let dx = ends.x_b - ends.x_a;
    let pref = (Complex::new(p.mass, T::zero()) / Complex::new(T::zero(), two_pi::<T>() * p.hbar * t)).sqrt();
    let phase = p.mass * dx * dx / (lit::<T>(2.0) * p.hbar * t);
    Ok(pref * Complex::new(T::zero(), phase).exp())
}

fn check_caustic<T: Real>(omega_t: T) -> Result<()> {
    let n = (omega_t / T::PI()).round();
    if n >= T::one() {
        let tol = lit::<T>(64.0) * T::epsilon() * omega_t.max(T::one());
        if (omega_t - n * T::PI()).abs() <= tol {
            return Err(Error::Caustic(format!("omega*T = {omega_t} is a multiple of pi")));
        }
    }
    Ok(())
}

/// Classical action of the oscillator between the endpoints.
///
/// S = mω[(x_a² + x_b²) cos ωT − 2 x_a x_b] / (2 sin ωT).
pub fn ho_action<T: Real>(ends: &SpacetimeEndpoints<T>, osc: &OscillatorParams<T>) -> Result<T> {
    let t = ends.checked_duration()?;
    let wt = osc.omega * t;
    check_caustic(wt)?;
    let (xa, xb) = (ends.x_a, ends.x_b);
    // mω/(2 sin ωT) written as m/(2T sinc ωT) so that ω = 0 is regular
    let scale = osc.particle.mass / (lit::<T>(2.0) * t * sinc(wt));
    Ok(scale * ((xa * xa + xb * xb) * wt.cos() - lit::<T>(2.0) * xa * xb))
}

/// √(m / (2πiħT sinc ωT)) · exp(i S_cl / ħ).
pub fn ho_kernel<T: Real>(ends: &SpacetimeEndpoints<T>, osc: &OscillatorParams<T>) -> Result<Complex<T>> {
    if osc.omega == T::zero() {
        return free_kernel(ends, &osc.particle);
    }
    let t = ends.checked_duration()?;
    let s = ho_action(ends, osc)?;
    let p = &osc.particle;
    let denom = Complex::new(T::zero(), two_pi::<T>() * p.hbar * t * sinc(osc.omega * t));
    let pref = (Complex::new(p.mass, T::zero()) / denom).sqrt();
    Ok(pref * Complex::new(T::zero(), s / p.hbar).exp())
}

/// Refraction angle from Snell's law.
pub fn snell_refract<T: Real>(n_a: T, n_b: T, theta_a: T) -> Result<T> {
    if !(n_a > T::zero()) || !(n_b > T::zero()) {
        return Err(Error::Domain("refractive indices must be positive".into()));
    }
    if !(theta_a >= T::zero()) || !(theta_a < T::FRAC_PI_2()) {
        return Err(Error::Domain(format!("incidence angle {theta_a} outside [0, pi/2)")));
    }
    if n_a == n_b {
        return Ok(theta_a);
    }
    let s = n_a * theta_a.sin() / n_b;
    if s > T::one() {
        return Err(Error::TotalInternalReflection(s.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(s.asin())
}

/// Two-segment optical action n_a·|AC| + n_b·|CB| for an interface point at lateral offset `x_c`.
///
/// A sits at (0, −depth_a), B at (lateral_b, depth_b), the interface is y = 0.
pub fn refraction_action<T: Real>(n_a: T, n_b: T, depth_a: T, depth_b: T, lateral_b: T, x_c: T) -> T {
    n_a * (x_c * x_c + depth_a * depth_a).sqrt() + n_b * ((lateral_b - x_c) * (lateral_b - x_c) + depth_b * depth_b).sqrt()
}

/// Outcome of [`quadratic_prefactor_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorizationReport<T> {
    /// Mean of K·e^{−iS/ħ} over the samples.
    pub prefactor: Complex<T>,
    /// Largest |K·e^{−iS/ħ} − mean| / |mean|.
    pub max_deviation: T,
}

impl<T: Real> FactorizationReport<T> {
    pub fn holds(&self, tol: T) -> bool {
        self.max_deviation < tol
    }
}

/// Checks that K·exp(−iS_cl/ħ) is the same for every `(kernel, action)` sample.
pub fn quadratic_prefactor_check<T: Real>(samples: &[(Complex<T>, T)], hbar: T) -> FactorizationReport<T> {
    let reduced: Vec<Complex<T>> = samples.iter().map(|(k, s)| k * Complex::new(T::zero(), -*s / hbar).exp()).collect();
    let n = T::from_usize(reduced.len().max(1)).unwrap();
    let mean = reduced.iter().fold(Complex::new(T::zero(), T::zero()), |a, b| a + b) / n;
    let scale = mean.norm();
    let max_deviation = reduced.iter().map(|r| (r - mean).norm() / scale).fold(T::zero(), T::max);
    FactorizationReport { prefactor: mean, max_deviation }
}
