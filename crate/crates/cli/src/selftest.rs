//! Quick oracle suite behind `--self-test`: each check compares an engine
//! result against an independent value and reports the deviation.

use feynpath::coherent::{dpa_auxiliary, solve_riccati, QuadraticHamiltonian};
use feynpath::grin::{grin_kernel, EnvelopeInit, GrinMedium, GrinSolver};
use feynpath::kernels::{free_kernel, ho_kernel, OscillatorParams, ParticleParams, SpacetimeEndpoints};
use feynpath::lattice::{double_slit_pattern, lattice_kernel, LatticeMethod, SliceRule, SlitGeometry, SpatialGrid, TimeSlicing};
use feynpath::pimc::{estimate, Observable, RunConfig, ThermalSystem};
use feynpath::potential::PotentialModel;
use feynpath::qed::{biphoton_probability_numeric, imag_green_k_quadrature, imag_green_loop, spdc_probability, spontaneous_rate, DispersiveMedium1D, EmitterEnvironment};
use feynpath::Result;
use num_complex::Complex64;
use std::f64::consts::PI;

struct Check {
    name: &'static str,
    tolerance: f64,
    run: fn() -> Result<f64>,
}

fn unit() -> ParticleParams<f64> {
    ParticleParams::default()
}

fn free_kernel_value() -> Result<f64> {
    let k = free_kernel(&SpacetimeEndpoints::over(0.0, 1.0, 1.0), &unit())?;
    Ok((k - Complex64::from_polar(0.398942280401433, 0.5 - PI / 4.0)).norm())
}

/// Without a potential the sliced integral is exact for any slice count.
fn recursion_is_exact_when_free() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &(xa, xb) in &[(0.0, 0.5), (-1.0, 0.7), (1.2, 1.3)] {
        let ends = SpacetimeEndpoints::over(xa, xb, 1.0);
        let exact = free_kernel(&ends, &unit())?;
        let k = lattice_kernel(&ends, &unit(), &PotentialModel::Free, &TimeSlicing::new(64, 1.0)?, &LatticeMethod::GaussianRecursion(SliceRule::Midpoint))?;
        worst = worst.max((k - exact).norm() / exact.norm());
    }
    Ok(worst)
}

fn grid_transfer_matches_oscillator() -> Result<f64> {
    let osc = OscillatorParams::new(unit(), 1.0)?;
    let grid = SpatialGrid::new(-8.0, 8.0, 1024)?;
    let mut worst: f64 = 0.0;
    for &(xa, xb) in &[(0.0, 0.5), (-1.0, 0.7)] {
        let ends = SpacetimeEndpoints::over(xa, xb, 1.0);
        let k = lattice_kernel(&ends, &unit(), &PotentialModel::harmonic(1.0, 1.0), &TimeSlicing::new(100, 1.0)?, &LatticeMethod::grid(grid))?;
        let exact = ho_kernel(&ends, &osc)?;
        worst = worst.max((k - exact).norm() / exact.norm());
    }
    Ok(worst)
}

fn double_slit_identity() -> Result<f64> {
    let geom = SlitGeometry::symmetric(1.0, 0.1, SpatialGrid::new(-5.0, 5.0, 128)?);
    let pat = double_slit_pattern(&geom, &unit())?;
    Ok((0..pat.x.len()).map(|i| (pat.p[i] - pat.p1[i] - pat.p2[i] - pat.cross[i]).abs()).fold(0.0, f64::max))
}

fn grin_is_mapped_oscillator() -> Result<f64> {
    let (n0, g, lambda) = (1.5, 0.8, 0.5);
    let medium = GrinMedium::constant(n0, g, lambda)?;
    let osc = OscillatorParams::new(ParticleParams::new(n0, lambda / (2.0 * PI))?, g)?;
    let k = grin_kernel(0.3, -0.2, 1.7, &medium)?;
    let mapped = ho_kernel(&SpacetimeEndpoints::over(0.3, -0.2, 1.7), &osc)? * medium.carrier(1.7);
    Ok((k - mapped).norm() / mapped.norm())
}

fn mode_sum_matches_kernel() -> Result<f64> {
    let solver = GrinSolver::new(GrinMedium::constant(1.0, 1.0, 2.0 * PI)?, 1.0, EnvelopeInit::FixedPoint)?;
    let exact = solver.kernel(1.0, -0.5, 1.0)?;
    let sum = solver.mode_kernel(1.0, -0.5, 0.0, 1.0, 60)?;
    Ok((sum.value - exact).norm() / exact.norm())
}

fn riccati_matches_amplifier() -> Result<f64> {
    let (omega, kappa) = (1.3, 0.5);
    let sol = solve_riccati(&QuadraticHamiltonian::degenerate_amplifier(omega, kappa), 0.0, 4.0, 1e-13)?;
    let mut worst: f64 = 0.0;
    for k in 0..=40 {
        let t = 0.1 * k as f64;
        let v = sol.at(t);
        let (x, y) = dpa_auxiliary(t, 0.0, omega, kappa);
        worst = worst.max((v.pair - x).norm()).max((v.transfer - y).norm());
    }
    Ok(worst)
}

fn spdc_unit_loss() -> Result<f64> {
    Ok((spdc_probability(0.0f64, 1.0, 1.0)? - 0.39958).abs())
}

fn spdc_quadrature() -> Result<f64> {
    let m = DispersiveMedium1D::with_mismatch(5.0, 0.2, 0.3, 1.0)?;
    Ok((biphoton_probability_numeric(&m)? - spdc_probability(5.0, 0.5, 1.0)?).abs())
}

fn emission_identity() -> Result<f64> {
    let env = EmitterEnvironment::new(0.0, 1.0, 1.0, 1.0)?;
    Ok((spontaneous_rate(&env)? - 0.5f64.sqrt()).abs())
}

fn momentum_quadrature() -> Result<f64> {
    let env = EmitterEnvironment::new(2.25, 0.5, 1.0, 2.0)?;
    let exact = imag_green_loop(&env)?;
    Ok((imag_green_k_quadrature(&env, 200.0)?.value - exact).abs() / exact)
}

/// |mean − oracle| in units of the error bar for the 8-bead ring at T = 1/2.
fn pimc_ring_oracle() -> Result<f64> {
    let (beads, t) = (8usize, 0.5);
    let dt = 1.0 / (t * beads as f64);
    let exact: f64 = (0..beads)
        .map(|j| 1.0 / ((2.0 - 2.0 * (2.0 * PI * j as f64 / beads as f64).cos()) / dt + dt))
        .sum::<f64>()
        / beads as f64;
    let sys = ThermalSystem::harmonic(1.0, 1.0, t)?;
    let cfg = RunConfig { beads, sweeps: 40_000, burn_in: 2_000, seed: 5, ..Default::default() };
    let e = estimate(Observable::MeanSquare, &sys, &cfg)?;
    Ok((e.mean - exact).abs() / e.error)
}

const CHECKS: &[Check] = &[
    Check { name: "free kernel closed form", tolerance: 1e-6, run: free_kernel_value },
    Check { name: "Gaussian recursion vs free kernel", tolerance: 1e-12, run: recursion_is_exact_when_free },
    Check { name: "grid transfer vs oscillator kernel", tolerance: 1e-3, run: grid_transfer_matches_oscillator },
    Check { name: "double-slit decomposition", tolerance: 1e-12, run: double_slit_identity },
    Check { name: "GRIN kernel vs mapped oscillator", tolerance: 1e-8, run: grin_is_mapped_oscillator },
    Check { name: "Mehler mode sum vs GRIN kernel", tolerance: 1e-6, run: mode_sum_matches_kernel },
    Check { name: "Riccati solution vs amplifier closed form", tolerance: 1e-8, run: riccati_matches_amplifier },
    Check { name: "pair probability at unit loss", tolerance: 1e-5, run: spdc_unit_loss },
    Check { name: "vertex quadrature vs closed form", tolerance: 1e-6, run: spdc_quadrature },
    Check { name: "emission rate in a purely absorbing medium", tolerance: 1e-12, run: emission_identity },
    Check { name: "momentum quadrature of Im G", tolerance: 1e-3, run: momentum_quadrature },
    Check { name: "PIMC ring oracle (sigma units)", tolerance: 4.0, run: pimc_ring_oracle },
];

/// Runs every check, printing one line each; true if all passed.
pub fn run() -> bool {
    let mut all = true;
    for c in CHECKS {
        match (c.run)() {
            Ok(dev) if dev < c.tolerance => println!("PASS {}: deviation {dev:.3e} < {:.0e}", c.name, c.tolerance),
            Ok(dev) => {
                all = false;
                println!("FAIL {}: deviation {dev:.3e} >= {:.0e}", c.name, c.tolerance);
            }
            Err(e) => {
                all = false;
                println!("FAIL {}: {e}", c.name);
            }
        }
    }
    all
}
