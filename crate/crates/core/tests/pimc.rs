use feynpath::pimc::*;
use feynpath::potential::PotentialModel;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exact ⟨x²⟩ (= virial energy for m = ω = 1) of the M-bead primitive ring:
/// the action is ½xᵀAx with A's eigenvalues (2 − 2cos(2πj/M))/Δτ + Δτ.
fn ring_mean_square(beta: f64, beads: usize) -> f64 {
    let dt = beta / beads as f64;
    let sum: f64 = (0..beads)
        .map(|j| 1.0 / ((2.0 - 2.0 * (2.0 * std::f64::consts::PI * j as f64 / beads as f64).cos()) / dt + dt))
        .sum();
    sum / beads as f64
}

/// Neumaier-compensated sum, used as an extended-precision reference.
fn compensated_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for t in terms {
        let u = s + t;
        c += if s.abs() >= t.abs() { (s - u) + t } else { (t - u) + s };
        s = u;
    }
    s + c
}

#[test]
fn primitive_action_matches_compensated_resummation() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let sys = ThermalSystem::harmonic(1.7, 0.9, 0.8).unwrap();
    for _ in 0..100 {
        let x: Vec<f64> = (0..4).map(|_| rng.random_range(-3.0..3.0)).collect();
        let poly = RingPolymer::from_positions(x.clone(), 0.8).unwrap();
        let dtau = 1.0 / (4.0 * 0.8);
        let oracle = compensated_sum((0..4).flat_map(|k| {
            let d = x[(k + 1) % 4] - x[k];
            [1.7 * d * d / (2.0 * dtau), dtau * 0.5 * 1.7 * 0.81 * x[k] * x[k]]
        }));
        let s = primitive_action(&poly, &sys);
        assert!((s - oracle).abs() < 1e-12 * oracle.abs().max(1.0), "{s} vs {oracle}");
    }
}

#[test]
fn harmonic_energy_at_unit_temperature() {
    let sys = ThermalSystem::harmonic(1.0, 1.0, 1.0).unwrap();
    let cfg = RunConfig { beads: 64, sweeps: 100_000, burn_in: 5_000, seed: 42, ..Default::default() };
    let e = estimate(Observable::TotalEnergyVirial, &sys, &cfg).unwrap();
    let exact = 0.5 / (0.5f64).tanh();
    assert!(e.trusted);
    assert!(e.error / exact < 0.02, "σ = {}", e.error);
    assert!((e.mean - exact).abs() < 3.0 * e.error, "{} ± {} vs {exact}", e.mean, e.error);
}

#[test]
fn matches_exact_finite_trotter_number_oracle() {
    for &(beads, t) in &[(8usize, 0.125), (16, 0.5)] {
        let sys = ThermalSystem::harmonic(1.0, 1.0, t).unwrap();
        let cfg = RunConfig { beads, sweeps: 200_000, burn_in: 5_000, seed: 3, ..Default::default() };
        let e = estimate(Observable::MeanSquare, &sys, &cfg).unwrap();
        let exact = ring_mean_square(1.0 / t, beads);
        assert!((e.mean - exact).abs() < 4.0 * e.error, "M={beads}: {} ± {} vs {exact}", e.mean, e.error);
    }
}

#[test]
fn classical_limit_equipartition() {
    let t = 25.0;
    let sys = ThermalSystem::harmonic(1.0, 1.0, t).unwrap();
    let cfg = RunConfig { beads: 8, sweeps: 100_000, burn_in: 2_000, seed: 5, ..Default::default() };
    let v = estimate(Observable::PotentialEnergy, &sys, &cfg).unwrap();
    assert!((v.mean - t / 2.0).abs() < 3.0 * v.error, "{} ± {}", v.mean, v.error);
}

#[test]
fn symmetric_potentials_have_zero_mean_position() {
    for pot in [PotentialModel::harmonic(1.0, 1.0), PotentialModel::DoubleWell { height: 1.0, x_min: 1.0 }] {
        let sys = ThermalSystem::new(1.0, pot, 0.5).unwrap();
        let cfg = RunConfig { beads: 32, sweeps: 50_000, burn_in: 2_000, seed: 8, ..Default::default() };
        let x = estimate(Observable::MeanPosition, &sys, &cfg).unwrap();
        assert!(x.mean.abs() < 3.0 * x.error, "{} ± {}", x.mean, x.error);
    }
}

#[test]
fn bead_spread_shrinks_as_temperature_drops() {
    let mut prev: Option<(f64, f64)> = None;
    for &t in &[2.0, 1.0, 0.5] {
        let sys = ThermalSystem::harmonic(1.0, 1.0, t).unwrap();
        let cfg = RunConfig { beads: 32, sweeps: 50_000, burn_in: 2_000, seed: 9, ..Default::default() };
        let x2 = estimate(Observable::MeanSquare, &sys, &cfg).unwrap();
        let exact = 0.5 / (0.5 / t).tanh();
        assert!((x2.mean - exact).abs() < 0.05 * exact);
        if let Some((m, e)) = prev {
            assert!(m - x2.mean > 3.0 * (e * e + x2.error * x2.error).sqrt());
        }
        prev = Some((x2.mean, x2.error));
    }
}

#[test]
fn trotter_error_decreases_with_bead_count() {
    // βω = 8: gaps between successive |E_M − E| are 3e-3 or more.
    let exact = 0.5 / (4.0f64).tanh();
    let mut errors = Vec::new();
    for &(beads, sweeps) in &[(8usize, 1_000_000usize), (16, 1_000_000), (32, 4_000_000), (64, 4_000_000)] {
        let sys = ThermalSystem::harmonic(1.0, 1.0, 0.125).unwrap();
        let cfg = RunConfig { beads, sweeps, burn_in: 10_000, seed: 100 + beads as u64, ..Default::default() };
        let e = estimate(Observable::TotalEnergyVirial, &sys, &cfg).unwrap();
        errors.push(((e.mean - exact).abs(), e.error));
    }
    for w in errors.windows(2) {
        assert!(w[0].0 > w[1].0, "{errors:?}");
    }
}

#[test]
fn charged_oscillator_polarizability() {
    let (q, m, omega) = (1.5, 1.2, 0.9);
    let sys = ThermalSystem::harmonic(m, omega, 1.0).unwrap().with_field(q, 0.0).unwrap();
    let cfg = RunConfig { beads: 32, sweeps: 100_000, burn_in: 5_000, seed: 21, ..Default::default() };
    let p = polarizability_finite_field(&sys, &[0.2, 0.4], &cfg).unwrap();
    let exact = q * q / (m * omega * omega);
    assert!(p.error / exact < 0.03, "σ = {}", p.error);
    assert!((p.alpha - exact).abs() < 3.0 * p.error, "{} ± {} vs {exact}", p.alpha, p.error);
    // doubling the field leaves α unchanged within errors
    let (a, b) = (p.points[0], p.points[1]);
    assert!((a.alpha - b.alpha).abs() < 3.0 * (a.error.powi(2) + b.error.powi(2)).sqrt());
}

#[test]
fn neutral_particle_is_not_polarized() {
    let sys = ThermalSystem::harmonic(1.0, 1.0, 1.0).unwrap();
    let cfg = RunConfig { beads: 16, sweeps: 5_000, burn_in: 500, ..Default::default() };
    let p = polarizability_finite_field(&sys, &[0.1, 0.2], &cfg).unwrap();
    assert_eq!(p.alpha, 0.0);
}

#[test]
fn strong_field_in_double_well_flagged_nonlinear() {
    // the response of a double well saturates once the field tilts it over
    let sys = ThermalSystem::new(1.0, PotentialModel::DoubleWell { height: 4.0, x_min: 1.0 }, 0.5)
        .unwrap()
        .with_field(1.0, 0.0)
        .unwrap();
    let cfg = RunConfig { beads: 16, sweeps: 40_000, burn_in: 2_000, seed: 4, ..Default::default() };
    let r = polarizability_finite_field(&sys, &[2.0, 8.0], &cfg);
    assert!(matches!(r, Err(feynpath::error::Error::FieldTooLarge(_))), "{r:?}");
}

#[test]
fn multichain_runs_deterministic_and_ordered() {
    let sys = ThermalSystem::harmonic(1.0, 1.0, 1.0).unwrap();
    let cfg = RunConfig { beads: 16, sweeps: 2_000, burn_in: 200, chains: 4, seed: 77, ..Default::default() };
    let a = run_chains(&sys, &cfg).unwrap();
    let b = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| run_chains(&sys, &cfg).unwrap());
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sweeps_preserve_ring_structure(seed in 0u64..1000, beads in 2usize..24, t in 0.1..5.0f64) {
        let sys = ThermalSystem::harmonic(1.0, 1.0, t).unwrap();
        let mut poly = RingPolymer::new(beads, t, 0.0).unwrap();
        let moves = MoveSet::defaults(beads, t, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let s = metropolis_sweep(&mut poly, &sys, &mut rng, &moves);
            prop_assert!((0.0..=1.0).contains(&s.acceptance()));
        }
        prop_assert_eq!(poly.len(), beads);
        prop_assert_eq!(poly.bead(beads as isize), poly.bead(0));
        prop_assert!(poly.positions().iter().all(|x| x.is_finite()));
        prop_assert!((poly.tau_step() * beads as f64 * t - 1.0).abs() < 1e-15);
    }
}
