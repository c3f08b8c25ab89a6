mod common;

use common::{chirp_integral, rel};
use feynpath::error::Error;
use feynpath::kernels::*;
use feynpath::numerics::composite_gauss_legendre;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};

fn unit() -> ParticleParams<f64> {
    ParticleParams::default()
}

/// Classical path of ẍ = −ω²x between the endpoints by shooting with RK4,
/// then ∫ ½m(ẋ² − ω²x²) dt by Simpson on the RK4 samples.
fn action_by_shooting(x_a: f64, x_b: f64, t: f64, omega: f64, mass: f64) -> f64 {
    let steps = 20_000;
    let h = t / steps as f64;
    let run = |v0: f64| -> Vec<(f64, f64)> {
        let f = |s: (f64, f64)| (s.1, -omega * omega * s.0);
        let mut s = (x_a, v0);
        let mut out = vec![s];
        for _ in 0..steps {
            let k1 = f(s);
            let k2 = f((s.0 + 0.5 * h * k1.0, s.1 + 0.5 * h * k1.1));
            let k3 = f((s.0 + 0.5 * h * k2.0, s.1 + 0.5 * h * k2.1));
            let k4 = f((s.0 + h * k3.0, s.1 + h * k3.1));
            s = (s.0 + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0), s.1 + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1));
            out.push(s);
        }
        out
    };
    // x(T) is affine in the initial velocity
    let end0 = run(0.0).last().unwrap().0;
    let end1 = run(1.0).last().unwrap().0;
    let path = run((x_b - end0) / (end1 - end0));
    let lag: Vec<f64> = path.iter().map(|&(x, v)| 0.5 * mass * (v * v - omega * omega * x * x)).collect();
    let mut s = lag[0] + lag[steps];
    for (i, l) in lag.iter().enumerate().take(steps).skip(1) {
        s += if i % 2 == 1 { 4.0 * l } else { 2.0 * l };
    }
    s * h / 3.0
}

#[test]
fn oscillator_action_matches_shooting_oracle() {
    let osc = OscillatorParams::new(unit(), 1.0).unwrap();
    let s = ho_action(&SpacetimeEndpoints::over(1.0, 1.0, FRAC_PI_2), &osc).unwrap();
    assert!((s - action_by_shooting(1.0, 1.0, FRAC_PI_2, 1.0, 1.0)).abs() < 1e-10);
    assert!((s + 1.0).abs() < 1e-14);
    for &(xa, xb, t, w, m) in &[(0.3, -1.2, 0.8, 1.7, 2.0), (-0.5, 0.9, 2.5, 0.6, 0.4), (1.1, 1.4, 3.0, 0.9, 1.0)] {
        let osc = OscillatorParams::new(ParticleParams::new(m, 1.0).unwrap(), w).unwrap();
        let s = ho_action(&SpacetimeEndpoints::over(xa, xb, t), &osc).unwrap();
        let oracle = action_by_shooting(xa, xb, t, w, m);
        assert!((s - oracle).abs() < 1e-9 * oracle.abs().max(1.0), "{s} vs {oracle}");
    }
}

#[test]
fn oscillator_action_free_limit_and_trivial_path() {
    let osc = OscillatorParams::new(ParticleParams::new(1.3, 1.0).unwrap(), 1e-7).unwrap();
    let s = ho_action(&SpacetimeEndpoints::over(0.2f64, 1.1, 1.5), &osc).unwrap();
    assert!((s - 1.3 * 0.81 / 3.0).abs() < 1e-12);
    let osc = OscillatorParams::new(unit(), 2.0).unwrap();
    assert_eq!(ho_action(&SpacetimeEndpoints::over(0.0, 0.0, 1.3), &osc).unwrap(), 0.0);
}

#[test]
fn oscillator_kernel_continuous_at_zero_frequency() {
    let osc = OscillatorParams::new(unit(), 1e-6).unwrap();
    for &(xa, xb) in &[(0.0, 0.0), (0.3, -1.0), (2.0, 1.5)] {
        let e = SpacetimeEndpoints::over(xa, xb, 1.0);
        let d = (ho_kernel(&e, &osc).unwrap() - free_kernel(&e, &unit()).unwrap()).norm();
        assert!(d < 1e-8, "{d}");
    }
    let zero = OscillatorParams::new(unit(), 0.0).unwrap();
    let e = SpacetimeEndpoints::over(0.4, -0.3, 0.9);
    assert_eq!(ho_kernel(&e, &zero).unwrap(), free_kernel(&e, &unit()).unwrap());
}

#[test]
fn caustic_at_half_period() {
    let osc = OscillatorParams::new(unit(), 1.0).unwrap();
    assert!(matches!(ho_kernel(&SpacetimeEndpoints::over(0.1, 0.2, PI), &osc), Err(Error::Caustic(_))));
    assert!(matches!(ho_action(&SpacetimeEndpoints::over(0.1, 0.2, 2.0 * PI), &osc), Err(Error::Caustic(_))));
}

#[test]
fn free_kernels_compose() {
    let p = ParticleParams::new(1.4, 0.8).unwrap();
    let (xa, xb, t1, t2) = (0.3, -0.5, 0.7, 1.1);
    let f = |x: f64| {
        free_kernel(&SpacetimeEndpoints::new(x, xb, t1, t1 + t2), &p).unwrap()
            * free_kernel(&SpacetimeEndpoints::over(xa, x, t1), &p).unwrap()
    };
    let alpha = 0.5 * p.mass / p.hbar * (1.0 / t1 + 1.0 / t2);
    let beta = -p.mass / p.hbar * (xb / t2 + xa / t1);
    let composed = chirp_integral(f, alpha, beta, 6.0);
    let direct = free_kernel(&SpacetimeEndpoints::over(xa, xb, t1 + t2), &p).unwrap();
    assert!(rel(composed, direct) < 1e-6, "{composed} vs {direct}");
}

#[test]
fn oscillator_kernels_compose() {
    let osc = OscillatorParams::new(unit(), 1.0).unwrap();
    let (xa, xb, t1, t2) = (0.8, 0.2, 0.6, 0.5);
    let f = |x: f64| {
        ho_kernel(&SpacetimeEndpoints::over(x, xb, t2), &osc).unwrap() * ho_kernel(&SpacetimeEndpoints::over(xa, x, t1), &osc).unwrap()
    };
    let alpha = 0.5 * (1.0 / t2.tan() + 1.0 / t1.tan());
    let beta = -(xb / t2.sin() + xa / t1.sin());
    let composed = chirp_integral(f, alpha, beta, 6.0);
    let direct = ho_kernel(&SpacetimeEndpoints::over(xa, xb, t1 + t2), &osc).unwrap();
    assert!(rel(composed, direct) < 1e-6, "{composed} vs {direct}");
}

#[test]
fn short_time_kernel_acts_as_delta() {
    let t = 1e-4;
    let x_a = 0.37;
    let phi = |x: f64| (-(x - 0.2) * (x - 0.2)).exp();
    let (nodes, weights) = composite_gauss_legendre(-9.0, 9.0, 40_000, 16);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in nodes.into_iter().zip(weights) {
        acc += free_kernel(&SpacetimeEndpoints::over(x_a, x, t), &unit()).unwrap() * phi(x) * w;
    }
    assert!((acc - phi(x_a)).norm() < 1e-3, "{acc} vs {}", phi(x_a));
}

#[test]
fn refraction_angle_from_least_action() {
    let theta_b = snell_refract(1.0, 1.5, 30f64.to_radians()).unwrap();
    assert!((theta_b.to_degrees() - 19.4712).abs() < 1e-4);
    // minimise the two-segment optical path by golden section
    let (na, nb, da, db, lb) = (1.0, 1.5, 1.0, 0.8, 1.3);
    let s = |x: f64| refraction_action(na, nb, da, db, lb, x);
    let (mut lo, mut hi) = (0.0, lb);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let (a, b) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if s(a) < s(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    let xc = 0.5 * (lo + hi);
    let incidence = (xc / da).atan();
    let refracted = ((lb - xc) / db).atan();
    assert!((snell_refract(na, nb, incidence).unwrap() - refracted).abs() < 1e-7);
    assert!(matches!(snell_refract(1.5, 1.0, 60f64.to_radians()), Err(Error::TotalInternalReflection(_))));
}

#[test]
fn exact_kernels_factorize() {
    let osc = OscillatorParams::new(unit(), 1.0).unwrap();
    let mut free = Vec::new();
    let mut harm = Vec::new();
    for i in 0..5 {
        for j in 0..5 {
            let e = SpacetimeEndpoints::over(-1.0 + 0.5 * i as f64, -1.0 + 0.5 * j as f64, 1.0);
            let s_free = 0.5 * (e.x_b - e.x_a).powi(2);
            free.push((free_kernel(&e, &unit()).unwrap(), s_free));
            harm.push((ho_kernel(&e, &osc).unwrap(), ho_action(&e, &osc).unwrap()));
        }
    }
    assert!(quadratic_prefactor_check(&free, 1.0).max_deviation < 1e-12);
    assert!(quadratic_prefactor_check(&harm, 1.0).max_deviation < 1e-12);
}

proptest! {
    #[test]
    fn free_modulus_depends_only_on_time(xa in -10.0..10.0f64, xb in -10.0..10.0f64, t in 0.01..10.0f64) {
        let k = free_kernel(&SpacetimeEndpoints::over(xa, xb, t), &unit()).unwrap();
        prop_assert!((k.norm() - (1.0 / (2.0 * PI * t)).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn oscillator_kernel_endpoint_symmetric(xa in -5.0..5.0f64, xb in -5.0..5.0f64, t in 0.01..3.0f64, w in 0.0..1.0f64) {
        let osc = OscillatorParams::new(unit(), w).unwrap();
        let k = ho_kernel(&SpacetimeEndpoints::over(xa, xb, t), &osc).unwrap();
        let swapped = ho_kernel(&SpacetimeEndpoints::over(xb, xa, t), &osc).unwrap();
        prop_assert!((k - swapped).norm() <= 1e-14 * k.norm());
    }

    #[test]
    fn oscillator_action_reduces_to_free_action(xa in -5.0..5.0f64, xb in -5.0..5.0f64, t in 0.1..5.0f64) {
        let osc = OscillatorParams::new(unit(), 1e-8).unwrap();
        let s = ho_action(&SpacetimeEndpoints::over(xa, xb, t), &osc).unwrap();
        prop_assert!((s - (xb - xa).powi(2) / (2.0 * t)).abs() < 1e-9 * (1.0 + s.abs()));
    }
}
