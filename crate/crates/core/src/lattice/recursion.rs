//! Iterated complex Gaussian integrals for quadratic sliced actions.

use super::{SliceRule, TimeSlicing};
use crate::error::{Error, Result};
use crate::kernels::{ParticleParams, SpacetimeEndpoints};
use crate::scalar::{lit, Real};
use num_complex::Complex;

/// Potential part of one slice action as a quadratic form in (u, v) = (x_{i−1}, x_i):
/// uu·u² + uv·u·v + vv·v² + u1·u + v1·v + c. The kinetic part m(v − u)²/(2ε)
/// is kept separate.
struct SlicePotential<T> {
    uu: T,
    uv: T,
    vv: T,
    u1: T,
    v1: T,
    c: T,
}

impl<T: Real> SlicePotential<T> {
    fn new(eps: T, rule: SliceRule, prev: (T, T, T), cur: (T, T, T)) -> Self {
        let two = lit::<T>(2.0);
        let four = lit::<T>(4.0);
        match rule {
            SliceRule::Midpoint => {
                let (a2, a1, a0) = cur;
                Self { uu: -eps * a2 / four, uv: -eps * a2 / two, vv: -eps * a2 / four, u1: -eps * a1 / two, v1: -eps * a1 / two, c: -eps * a0 }
            }
            SliceRule::Trapezoid => Self {
                uu: -eps * prev.0 / two,
                uv: T::zero(),
                vv: -eps * cur.0 / two,
                u1: -eps * prev.1 / two,
                v1: -eps * cur.1 / two,
                c: -eps * (prev.2 + cur.2) / two,
            },
        }
    }

    /// Re-expands around (ū, v̄): returns the linear coefficients and constant
    /// of the form in the deviations u − ū, v − v̄.
    fn shifted(&self, ub: T, vb: T) -> (T, T, T) {
        let two = lit::<T>(2.0);
        let lu = two * self.uu * ub + self.uv * vb + self.u1;
        let lv = self.uv * ub + two * self.vv * vb + self.v1;
        let c = (self.uu * ub + self.uv * vb + self.u1) * ub + (self.vv * vb + self.v1) * vb + self.c;
        (lu, lv, c)
    }
}

/// Sliced kernel for V(x, t) = a(t)x² + b(t)x + c(t), with every intermediate
/// integral done in closed form. `coefficients(t)` returns (a, b, c); the
/// slice action is the one of [`super::lattice_action`] with the same rule.
///
/// Paths are written as the straight line from x_a to x_b plus a deviation
/// vanishing at both ends. The kinetic action of the line is m(x_b − x_a)²/(2T)
/// exactly and its cross terms with the deviation telescope away, so no
/// large phases of size m x²/ε ever cancel.
pub fn gaussian_recursion<T, C>(
    ends: &SpacetimeEndpoints<T>,
    p: &ParticleParams<T>,
    coefficients: C,
    slicing: &TimeSlicing<T>,
    rule: SliceRule,
) -> Result<Complex<T>>
where
    T: Real,
    C: Fn(T) -> (T, T, T),
{
    let eps = slicing.epsilon();
    let hbar = p.hbar;
    let inv_a = slicing.normalization(p).inv();
    let i = Complex::new(T::zero(), T::one());
    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);
    let n = slicing.steps();
    let t_of = |k: usize| ends.t_a + T::from_usize(k).unwrap() * eps;
    let span = ends.x_b - ends.x_a;
    let line = |k: usize| ends.x_a + span * T::from_usize(k).unwrap() / T::from_usize(n).unwrap();
    let kin = p.mass / (two * eps);

    // potential form of slice k, shifted onto the line
    let slice = |k: usize| {
        let pot = SlicePotential::new(eps, rule, coefficients(t_of(k - 1)), coefficients(t_of(k)));
        let (lu, lv, c) = pot.shifted(line(k - 1), line(k));
        let uu = kin + pot.uu;
        let uv = pot.uv - two * kin;
        let vv = kin + pot.vv;
        // 4·uu·vv − uv², with the kinetic parts cancelled analytically
        let det = four * kin * (pot.uu + pot.vv + pot.uv) + four * pot.uu * pot.vv - pot.uv * pot.uv;
        (uu, uv, vv, lu, lv, c, det)
    };

    let (_, _, vv, _, lv, c, _) = slice(1);
    let mut quad = vv;
    let mut lin = lv;
    let mut cst = c;
    let mut pref = inv_a;
    for k in 2..=n {
        let (uu, uv, vv, lu, lv, c, det) = slice(k);
        let alpha = quad + uu;
        if alpha.abs() <= T::epsilon() * (quad.abs() + uu.abs()) {
            return Err(Error::Caustic(format!("vanishing Gaussian width at slice {k}")));
        }
        let beta0 = lin + lu;
        let gauss = (i * T::PI() * hbar / alpha).sqrt();
        pref = pref * inv_a * gauss;
        quad = (four * quad * vv + det) / (four * alpha);
        lin = lv - uv * beta0 / (two * alpha);
        cst = cst + c - beta0 * beta0 / (four * alpha);
    }
    let phase = (cst + p.mass * span * span / (two * slicing.duration())) / hbar;
    Ok(pref * (i * phase).exp())
}
