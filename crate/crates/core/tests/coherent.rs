use feynpath::coherent::*;
use feynpath::numerics::{integrate, simpson, OdeOptions};
use num_complex::Complex64;
use proptest::prelude::*;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn label(re: f64, im: f64, t: f64) -> CoherentLabel {
    CoherentLabel::new(Complex64::new(re, im), t).unwrap()
}

#[test]
fn riccati_reproduces_amplifier_closed_forms() {
    let omega = 1.3;
    for &kappa in &[0.25, 0.5, 1.0] {
        // κΔt runs over [0, 2]
        let t_a = 0.4;
        let t_b = t_a + 2.0 / kappa;
        let sol = solve_riccati(&QuadraticHamiltonian::degenerate_amplifier(omega, kappa), t_a, t_b, 1e-13).unwrap();
        let mut worst: f64 = 0.0;
        for k in 0..=200 {
            let t = t_a + (t_b - t_a) * k as f64 / 200.0;
            let (x, y) = dpa_auxiliary(t, t_a, omega, kappa);
            let v = sol.at(t);
            worst = worst.max((v.pair - x).norm()).max((v.transfer - y).norm()).max(v.displacement.norm());
        }
        assert!(worst < 1e-8, "kappa={kappa}: {worst:e}");
    }
}

#[test]
fn general_propagator_matches_amplifier_closed_form() {
    let omega = 0.7;
    let mut worst: f64 = 0.0;
    for &kappa in &[0.0, 0.3, 0.6, 1.0] {
        let sol = solve_riccati(&QuadraticHamiltonian::degenerate_amplifier(omega, kappa), 0.0, 2.0, 1e-13).unwrap();
        let a = label(0.5, -0.2, 0.0);
        for k in 0..=10 {
            let t = 0.2 * k as f64;
            for &(re, im) in &[(0.0, 0.0), (0.8, 0.3), (-0.6, 1.1)] {
                let b = label(re, im, t);
                let k1 = quadratic_propagator(&a, &b, &sol).unwrap();
                let k2 = dpa_propagator(&a, &b, omega, kappa);
                worst = worst.max((k1 - k2).norm());
            }
        }
    }
    assert!(worst < 1e-8, "{worst:e}");
}

/// ⟨α_b| U(t_b, t_a) |α_a⟩ by integrating the Schrödinger equation in a
/// truncated Fock basis.
fn fock_propagator(h: &QuadraticHamiltonian, a: CoherentLabel, b: CoherentLabel, levels: usize) -> Complex64 {
    let coherent = |alpha: Complex64| -> Vec<Complex64> {
        let mut c = vec![Complex64::default(); levels];
        c[0] = Complex64::from((-0.5 * alpha.norm_sqr()).exp());
        for n in 1..levels {
            c[n] = c[n - 1] * alpha / (n as f64).sqrt();
        }
        c
    };
    let psi0 = coherent(a.alpha);
    let y0: Vec<f64> = psi0.iter().flat_map(|c| [c.re, c.im]).collect();
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        let omega = h.frequency.at(t);
        let f = h.pairing.at(t);
        let g = h.drive.at(t);
        let psi = |n: usize| Complex64::new(y[2 * n], y[2 * n + 1]);
        for n in 0..levels {
            let nf = n as f64;
            let mut hpsi = omega * nf * psi(n);
            if n + 2 < levels {
                hpsi += f * ((nf + 1.0) * (nf + 2.0)).sqrt() * psi(n + 2);
            }
            if n >= 2 {
                hpsi += f.conj() * (nf * (nf - 1.0)).sqrt() * psi(n - 2);
            }
            if n + 1 < levels {
                hpsi += g * (nf + 1.0).sqrt() * psi(n + 1);
            }
            if n >= 1 {
                hpsi += g.conj() * nf.sqrt() * psi(n - 1);
            }
            let d = -I * hpsi;
            dy[2 * n] = d.re;
            dy[2 * n + 1] = d.im;
        }
    };
    let sol = integrate(rhs, a.time, &y0, b.time, &OdeOptions::with_tol(1e-12)).unwrap();
    let y = sol.final_state();
    let bra = coherent(b.alpha);
    (0..levels).map(|n| bra[n].conj() * Complex64::new(y[2 * n], y[2 * n + 1])).sum()
}

#[test]
fn general_propagator_matches_fock_space_evolution() {
    // complex, time-dependent pairing and drive with a chirped frequency
    let h = QuadraticHamiltonian::new(
        Coefficient::expression(|t| 1.0 + 0.3 * t),
        Coefficient::expression(|t| Complex64::new(0.25 * (1.0 + t).cos(), 0.15)),
        Coefficient::expression(|t| Complex64::new(0.4, -0.3 * t)),
    );
    let (t_a, t_b) = (0.1, 1.6);
    let sol = solve_riccati(&h, t_a, t_b, 1e-12).unwrap();
    let a = label(0.6, -0.3, t_a);
    for &(re, im) in &[(0.0, 0.0), (0.4, 0.5), (-0.7, 0.2)] {
        let b = label(re, im, t_b);
        let k = quadratic_propagator(&a, &b, &sol).unwrap();
        let oracle = fock_propagator(&h, a, b, 60);
        assert!((k - oracle).norm() < 1e-8, "{k} vs {oracle}");
    }
}

#[test]
fn phase_integral_agrees_with_simpson_on_dense_output() {
    let mut h = QuadraticHamiltonian::degenerate_amplifier(0.9, 0.4);
    h.drive = Coefficient::Constant(Complex64::new(0.2, 0.1));
    let (t_a, t_b) = (0.0, 1.5);
    let sol = solve_riccati(&h, t_a, t_b, 1e-12).unwrap();
    let alpha_a = Complex64::new(0.3, 0.4);
    let n = 2001;
    let step = (t_b - t_a) / (n - 1) as f64;
    let samples: Vec<Complex64> = (0..n)
        .map(|k| {
            let t = t_a + step * k as f64;
            let v = sol.at(t);
            let (f, g) = (h.pairing.at(t), h.drive.at(t));
            let (y, z) = (v.transfer, v.displacement);
            f * (2.0 * v.pair + z * z + alpha_a * alpha_a * y * y + 2.0 * alpha_a * y * z) + g * (z + alpha_a * y)
        })
        .collect();
    let by_simpson = simpson(&samples, step);
    let by_ode = sol.at(t_b).phase_integral(alpha_a);
    assert!((by_simpson - by_ode).norm() < 1e-9, "{by_simpson} vs {by_ode}");
}

#[test]
fn zero_drive_keeps_displacement_zero() {
    let sol = solve_riccati(&QuadraticHamiltonian::degenerate_amplifier(0.5, 0.8), 0.0, 1.0, 1e-12).unwrap();
    for t in sol.mesh() {
        let v = sol.at(t);
        assert_eq!(v.displacement, Complex64::default());
        assert_eq!(v.phase[1], Complex64::default());
    }
}

#[test]
fn vacuum_persistence_matches_numerical_composition() {
    let (omega, kappa) = (0.6, 0.5);
    let (t_a, t_c, t_b) = (0.0, 0.7, 1.5);
    let vac = |t| label(0.0, 0.0, t);
    let est = compose_monte_carlo(
        |c| dpa_propagator(&CoherentLabel { alpha: c, time: t_c }, &vac(t_b), omega, kappa),
        |c| dpa_propagator(&vac(t_a), &CoherentLabel { alpha: c, time: t_c }, omega, kappa),
        400_000,
        11,
        GaussianProposal::default(),
    )
    .unwrap();
    let direct = dpa_propagator(&vac(t_a), &vac(t_b), omega, kappa);
    assert!((direct.norm_sqr() - 1.0 / (2.0 * kappa * (t_b - t_a)).cosh()).abs() < 1e-14);
    assert!((est.value - direct).norm() < 5.0 * est.std_error, "{} vs {direct} ± {}", est.value, est.std_error);
}

#[test]
fn composition_holds_with_a_million_samples() {
    let (omega, kappa) = (1.0, 0.5);
    let a = label(0.4, -0.3, 0.0);
    let b = label(-0.2, 0.5, 1.2);
    let t_c = 0.5;
    let est = compose_monte_carlo(
        |c| dpa_propagator(&CoherentLabel { alpha: c, time: t_c }, &b, omega, kappa),
        |c| dpa_propagator(&a, &CoherentLabel { alpha: c, time: t_c }, omega, kappa),
        1_000_000,
        2024,
        GaussianProposal::default(),
    )
    .unwrap();
    let exact = dpa_propagator(&a, &b, omega, kappa);
    let rel = (est.value - exact).norm() / exact.norm();
    assert!(rel < 1e-2, "relative error {rel:e}, std error {:e}", est.std_error / exact.norm());
}

#[test]
fn time_reversal_identity() {
    let (omega, kappa) = (0.8, 0.6);
    for &(ta, tb) in &[(0.0, 1.0), (0.3, 2.2)] {
        for &(a, b) in &[((0.3, 0.1), (-0.5, 0.7)), ((1.0, -0.4), (0.2, 0.2))] {
            let fwd = dpa_propagator(&label(a.0, a.1, ta), &label(b.0, b.1, tb), omega, kappa);
            let back = dpa_propagator(&label(b.0, b.1, tb), &label(a.0, a.1, ta), omega, kappa);
            assert!((fwd - back.conj()).norm() < 1e-14);
        }
    }
}

/// d⟨a⟩/dt = −iω⟨a⟩ − 2i f*⟨a⟩* − i g*.
fn heisenberg_mean(h: &QuadraticHamiltonian, a0: Complex64, t: f64) -> Complex64 {
    let rhs = |s: f64, y: &[f64], dy: &mut [f64]| {
        let m = Complex64::new(y[0], y[1]);
        let d = -I * h.frequency.at(s) * m - 2.0 * I * h.pairing.at(s).conj() * m.conj() - I * h.drive.at(s).conj();
        dy[0] = d.re;
        dy[1] = d.im;
    };
    let sol = integrate(rhs, 0.0, &[a0.re, a0.im], t, &OdeOptions::with_tol(1e-12)).unwrap();
    Complex64::new(sol.final_state()[0], sol.final_state()[1])
}

#[test]
fn squeezed_mean_matches_heisenberg_oracle() {
    for &(omega, kappa, t, a0) in &[(0.0, 0.5, 1.0, Complex64::new(0.8, 0.0)), (1.2, 0.4, 1.5, Complex64::new(0.5, -0.6))] {
        let kernel = move |beta: Complex64, alpha: Complex64| {
            dpa_propagator(&CoherentLabel { alpha, time: 0.0 }, &CoherentLabel { alpha: beta, time: t }, omega, kappa)
        };
        let opts = PhaseSpaceOptions::squeezed(2.0 * kappa * t);
        let e = expectation_annihilation(&PointMixture::point(a0), &kernel, &opts).unwrap();
        let oracle = heisenberg_mean(&QuadraticHamiltonian::degenerate_amplifier(omega, kappa), a0, t);
        assert!((e.value - oracle).norm() / oracle.norm() < 1e-3, "{} vs {oracle}", e.value);
        assert!((e.norm - 1.0).abs() < 1e-8);
        if omega == 0.0 {
            let r = 2.0 * kappa * t;
            let bogoliubov = a0 * r.cosh() - I * a0.conj() * r.sinh();
            assert!((oracle - bogoliubov).norm() < 1e-9);
        }
    }
}

#[test]
fn driven_mean_matches_heisenberg_oracle() {
    let mut h = QuadraticHamiltonian::degenerate_amplifier(0.9, 0.3);
    h.drive = Coefficient::expression(|t| Complex64::new(0.2, 0.1 * t));
    let t = 1.4;
    let sol = solve_riccati(&h, 0.0, t, 1e-12).unwrap();
    let kernel = |beta: Complex64, alpha: Complex64| {
        quadratic_propagator(&CoherentLabel { alpha, time: 0.0 }, &CoherentLabel { alpha: beta, time: t }, &sol).unwrap()
    };
    let a0 = Complex64::new(-0.3, 0.7);
    let e = expectation_annihilation(&PointMixture::point(a0), &kernel, &PhaseSpaceOptions::squeezed(0.6 * t)).unwrap();
    let oracle = heisenberg_mean(&h, a0, t);
    assert!((e.value - oracle).norm() / oracle.norm() < 1e-3, "{} vs {oracle}", e.value);
}

proptest! {
    #[test]
    fn overlap_bounded_without_pumping(
        ar in -3.0..3.0f64, ai in -3.0..3.0f64, br in -3.0..3.0f64, bi in -3.0..3.0f64,
        omega in -5.0..5.0f64, dt in 0.0..5.0f64,
    ) {
        let k = dpa_propagator(&label(ar, ai, 0.0), &label(br, bi, dt), omega, 0.0);
        prop_assert!(k.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn propagator_consistency_random(kappa in 0.0..1.0f64, dt in 0.0..2.0f64, br in -1.5..1.5f64, bi in -1.5..1.5f64) {
        let omega = 0.9;
        let sol = solve_riccati(&QuadraticHamiltonian::degenerate_amplifier(omega, kappa), 0.0, dt.max(1e-9), 1e-13).unwrap();
        let a = label(0.3, 0.2, 0.0);
        let b = label(br, bi, dt.max(1e-9));
        let k1 = quadratic_propagator(&a, &b, &sol).unwrap();
        let k2 = dpa_propagator(&a, &b, omega, kappa);
        prop_assert!((k1 - k2).norm() < 1e-8);
    }
}
