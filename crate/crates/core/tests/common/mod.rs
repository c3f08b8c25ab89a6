#![allow(dead_code)]

use feynpath::numerics::{fresnel_segment, integrate_adaptive};
use num_complex::Complex64;

/// ∫_{−∞}^{∞} f(x) dx for an integrand that is exactly C·e^{i(αx² + βx)}
/// with α > 0: adaptive quadrature on [−R, R] plus both tails in closed form
/// through Fresnel integrals.
pub fn chirp_integral(f: impl Fn(f64) -> Complex64, alpha: f64, beta: f64, r: f64) -> Complex64 {
    assert!(alpha > 0.0);
    let core = integrate_adaptive(&f, -r, r, 1e-13, 1e-12, 50_000).expect("core quadrature").value;
    let far = 1e12;
    let shift = beta / (2.0 * alpha);
    let completion = Complex64::from_polar(1.0, -beta * beta / (4.0 * alpha));
    let right = completion * fresnel_segment(alpha, r + shift, far).conj();
    let left = completion * fresnel_segment(alpha, -far, -r + shift).conj();
    let c_right = f(r) * Complex64::from_polar(1.0, -(alpha * r * r + beta * r));
    let c_left = f(-r) * Complex64::from_polar(1.0, -(alpha * r * r - beta * r));
    core + c_right * right + c_left * left
}

/// Relative distance |a − b|/|b|.
pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}
