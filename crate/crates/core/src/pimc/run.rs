//! Markov chains, sampling and thermal estimators.

use super::blocking::blocking_analysis;
use super::moves::{metropolis_sweep, MoveSet, SweepStats};
use super::{RingPolymer, ThermalSystem};
use crate::error::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub beads: usize,
    /// Recorded sweeps per chain, after burn-in.
    pub sweeps: usize,
    pub burn_in: usize,
    pub seed: u64,
    /// Independent chains; chain c uses ChaCha8 stream c of `seed`.
    pub chains: usize,
    /// `None` selects [`MoveSet::defaults`].
    pub moves: Option<MoveSet>,
    /// Adjust move widths towards 50% acceptance during burn-in.
    pub tune: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { beads: 64, sweeps: 100_000, burn_in: 5_000, seed: 1, chains: 1, moves: None, tune: true }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.beads < 2 {
            return Err(Error::InvalidInput(format!("need at least 2 beads, got {}", self.beads)));
        }
        if self.sweeps < 2 || self.chains == 0 {
            return Err(Error::InvalidInput("need at least 2 sweeps and 1 chain".into()));
        }
        if let Some(m) = &self.moves {
            if !(m.single_bead_width >= 0.0) || !(m.centroid_width >= 0.0) {
                return Err(Error::InvalidInput("move widths must be non-negative".into()));
            }
            if m.staging_length > self.beads {
                return Err(Error::InvalidInput(format!("staging length {} exceeds bead count {}", m.staging_length, self.beads)));
            }
        }
        Ok(())
    }
}

/// Bead-averaged quantities recorded once per sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Observable {
    /// ⟨U⟩.
    PotentialEnergy,
    /// ⟨U⟩ + ½⟨x U'(x)⟩.
    TotalEnergyVirial,
    /// ⟨x⟩.
    MeanPosition,
    /// ⟨x²⟩.
    MeanSquare,
}

impl Observable {
    pub const ALL: [Observable; 4] = [Observable::PotentialEnergy, Observable::TotalEnergyVirial, Observable::MeanPosition, Observable::MeanSquare];

    fn index(self) -> usize {
        match self {
            Observable::PotentialEnergy => 0,
            Observable::TotalEnergyVirial => 1,
            Observable::MeanPosition => 2,
            Observable::MeanSquare => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Observable::PotentialEnergy => "potential_energy",
            Observable::TotalEnergyVirial => "total_energy_virial",
            Observable::MeanPosition => "mean_position",
            Observable::MeanSquare => "mean_square",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainOutput {
    /// One row per recorded sweep, indexed by observable.
    pub samples: Vec<[f64; 4]>,
    /// Move statistics over the recorded sweeps.
    pub stats: SweepStats,
    /// Move widths used after tuning.
    pub moves: MoveSet,
}

impl ChainOutput {
    pub fn trace(&self, obs: Observable) -> Vec<f64> {
        self.samples.iter().map(|s| s[obs.index()]).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub chains: Vec<ChainOutput>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorResult {
    pub mean: f64,
    pub error: f64,
    /// Integrated autocorrelation time in sweeps.
    pub autocorrelation_time: f64,
    pub samples: usize,
    /// False if any chain's blocking analysis found no plateau.
    pub trusted: bool,
}

impl RunOutput {
    /// Chains have equal length, so their means are averaged with equal
    /// weights and their blocking errors combined in quadrature.
    pub fn estimate(&self, obs: Observable) -> EstimatorResult {
        let n = self.chains.len() as f64;
        let mut mean = 0.0;
        let mut var = 0.0;
        let mut tau = 0.0;
        let mut samples = 0;
        let mut trusted = true;
        for chain in &self.chains {
            let r = blocking_analysis(&chain.trace(obs));
            mean += r.mean;
            var += r.std_error * r.std_error;
            tau += r.autocorrelation_time;
            samples += r.samples;
            trusted &= r.plateau;
        }
        EstimatorResult { mean: mean / n, error: var.sqrt() / n, autocorrelation_time: tau / n, samples, trusted }
    }

    pub fn stats(&self) -> SweepStats {
        let mut total = SweepStats::default();
        for c in &self.chains {
            total.add(&c.stats);
        }
        total
    }
}

fn observe(poly: &RingPolymer, sys: &ThermalSystem) -> [f64; 4] {
    let x = poly.positions();
    let mut acc = [0.0; 4];
    for &xi in x {
        let u = sys.energy(xi);
        acc[0] += u;
        acc[1] += u + 0.5 * xi * sys.energy_derivative(xi);
        acc[2] += xi;
        acc[3] += xi * xi;
    }
    let inv = 1.0 / x.len() as f64;
    acc.map(|a| a * inv)
}

fn tune(width: f64, acceptance: f64) -> f64 {
    (width * (2.0 * (acceptance - 0.5)).exp()).clamp(1e-6, 1e3)
}

fn run_chain(sys: &ThermalSystem, config: &RunConfig, chain: usize) -> Result<ChainOutput> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(chain as u64);
    let mut moves = config.moves.unwrap_or_else(|| MoveSet::defaults(config.beads, sys.temperature, sys.mass));
    let mut poly = RingPolymer::new(config.beads, sys.temperature, 0.0)?;

    let mut window = SweepStats::default();
    for sweep in 0..config.burn_in {
        let s = metropolis_sweep(&mut poly, sys, &mut rng, &moves);
        window.add(&s);
        if config.tune && (sweep + 1) % 50 == 0 {
            if window.single_attempted > 0 {
                moves.single_bead_width = tune(moves.single_bead_width, window.single_acceptance());
            }
            if window.centroid_attempted > 0 {
                moves.centroid_width = tune(moves.centroid_width, window.centroid_acceptance());
            }
            window = SweepStats::default();
        }
    }

    let mut stats = SweepStats::default();
    let mut samples = Vec::with_capacity(config.sweeps);
    for _ in 0..config.sweeps {
        stats.add(&metropolis_sweep(&mut poly, sys, &mut rng, &moves));
        samples.push(observe(&poly, sys));
    }
    if samples.iter().any(|s| s.iter().any(|v| !v.is_finite())) {
        return Err(Error::Tolerance(format!("chain {chain} produced non-finite samples")));
    }
    Ok(ChainOutput { samples, stats, moves })
}

/// Runs `config.chains` independent chains in parallel; outputs are in
/// chain order and do not depend on the thread count.
pub fn run_chains(sys: &ThermalSystem, config: &RunConfig) -> Result<RunOutput> {
    sys.validate()?;
    config.validate()?;
    let chains = (0..config.chains).into_par_iter().map(|c| run_chain(sys, config, c)).collect::<Result<Vec<_>>>()?;
    Ok(RunOutput { chains })
}

/// Runs the chains and reduces one observable.
pub fn estimate(observable: Observable, sys: &ThermalSystem, config: &RunConfig) -> Result<EstimatorResult> {
    Ok(run_chains(sys, config)?.estimate(observable))
}
