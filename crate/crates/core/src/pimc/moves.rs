//! Metropolis moves on the ring polymer.

use super::{RingPolymer, ThermalSystem};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Move widths and the staging segment length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoveSet {
    /// Standard deviation of single-bead Gaussian displacements; 0 disables them.
    pub single_bead_width: f64,
    /// Beads spanned by a staging move (endpoints included in the count, so
    /// ℓ − 1 beads are regrown); values below 2 disable staging.
    pub staging_length: usize,
    /// Standard deviation of rigid whole-polymer shifts; 0 disables them.
    pub centroid_width: f64,
}

impl MoveSet {
    /// Defaults for `beads` beads at temperature `temperature`: single-bead width
    /// √(Δτ/m), staging over M/4 beads, centroid width √(T/m)-ish.
    pub fn defaults(beads: usize, temperature: f64, mass: f64) -> Self {
        let dtau = 1.0 / (beads as f64 * temperature);
        Self {
            single_bead_width: (dtau / mass).sqrt(),
            staging_length: (beads / 4).max(2).min(beads),
            centroid_width: 0.5 * (temperature / mass).sqrt().min(1.0 / mass.sqrt()),
        }
    }
}

/// Accepted/attempted counts per move type.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SweepStats {
    pub single_accepted: u64,
    pub single_attempted: u64,
    pub staging_accepted: u64,
    pub staging_attempted: u64,
    pub centroid_accepted: u64,
    pub centroid_attempted: u64,
}

impl SweepStats {
    pub fn add(&mut self, other: &SweepStats) {
        self.single_accepted += other.single_accepted;
        self.single_attempted += other.single_attempted;
        self.staging_accepted += other.staging_accepted;
        self.staging_attempted += other.staging_attempted;
        self.centroid_accepted += other.centroid_accepted;
        self.centroid_attempted += other.centroid_attempted;
    }

    fn ratio(a: u64, n: u64) -> f64 {
        if n == 0 {
            0.0
        } else {
            a as f64 / n as f64
        }
    }

    pub fn single_acceptance(&self) -> f64 {
        Self::ratio(self.single_accepted, self.single_attempted)
    }

    pub fn staging_acceptance(&self) -> f64 {
        Self::ratio(self.staging_accepted, self.staging_attempted)
    }

    pub fn centroid_acceptance(&self) -> f64 {
        Self::ratio(self.centroid_accepted, self.centroid_attempted)
    }

    /// Accepted over attempted across all move types.
    pub fn acceptance(&self) -> f64 {
        Self::ratio(
            self.single_accepted + self.staging_accepted + self.centroid_accepted,
            self.single_attempted + self.staging_attempted + self.centroid_attempted,
        )
    }
}

#[inline]
pub(crate) fn accept<R: Rng + ?Sized>(delta_action: f64, rng: &mut R) -> bool {
    delta_action <= 0.0 || rng.random::<f64>() < (-delta_action).exp()
}

/// Change of the primitive action when bead k moves from x[k] to `new`.
#[inline]
pub(crate) fn single_bead_delta(x: &[f64], k: usize, new: f64, sys: &ThermalSystem, dtau: f64) -> f64 {
    let m = x.len();
    let left = x[(k + m - 1) % m];
    let right = x[(k + 1) % m];
    let old = x[k];
    let spring = ((new - left).powi(2) - (old - left).powi(2)) + ((right - new).powi(2) - (right - old).powi(2));
    0.5 * sys.mass * spring / dtau + dtau * (sys.energy(new) - sys.energy(old))
}

/// One sweep: a single-bead move on every bead in order, M/ℓ staging
/// regrowths at random positions and one rigid shift.
pub fn metropolis_sweep<R: Rng + ?Sized>(poly: &mut RingPolymer, sys: &ThermalSystem, rng: &mut R, moves: &MoveSet) -> SweepStats {
    let dtau = poly.tau_step();
    let m = poly.len();
    let mut stats = SweepStats::default();

    if moves.single_bead_width > 0.0 {
        let x = poly.positions_mut();
        for k in 0..m {
            let step: f64 = StandardNormal.sample(rng);
            let new = x[k] + moves.single_bead_width * step;
            stats.single_attempted += 1;
            if accept(single_bead_delta(x, k, new, sys, dtau), rng) {
                x[k] = new;
                stats.single_accepted += 1;
            }
        }
    }

    let ell = moves.staging_length.min(m);
    if ell >= 2 {
        let mut trial = vec![0.0; ell - 1];
        for _ in 0..(m / ell).max(1) {
            stats.staging_attempted += 1;
            if staging_move(poly, sys, rng, ell, &mut trial) {
                stats.staging_accepted += 1;
            }
        }
    }

    if moves.centroid_width > 0.0 {
        let z: f64 = StandardNormal.sample(rng);
        let shift = moves.centroid_width * z;
        let x = poly.positions();
        let delta: f64 = x.iter().map(|&xi| sys.energy(xi + shift) - sys.energy(xi)).sum::<f64>() * dtau;
        stats.centroid_attempted += 1;
        if accept(delta, rng) {
            for xi in poly.positions_mut() {
                *xi += shift;
            }
            stats.centroid_accepted += 1;
        }
    }
    stats
}

/// Regrows the ℓ − 1 beads between bead j and bead j + ℓ from the exact
/// free-particle bridge; accepted on the potential part of the action alone.
fn staging_move<R: Rng + ?Sized>(poly: &mut RingPolymer, sys: &ThermalSystem, rng: &mut R, ell: usize, trial: &mut [f64]) -> bool {
    let dtau = poly.tau_step();
    let m = poly.len();
    let start = rng.random_range(0..m);
    let x = poly.positions();
    let end = x[(start + ell) % m];
    let mut prev = x[start];
    let mut delta = 0.0;
    for s in 1..ell {
        let remaining = (ell - s) as f64;
        let mean = (remaining * prev + end) / (remaining + 1.0);
        let var = dtau / sys.mass * remaining / (remaining + 1.0);
        let z: f64 = StandardNormal.sample(rng);
        let new = mean + var.sqrt() * z;
        let old = x[(start + s) % m];
        delta += sys.energy(new) - sys.energy(old);
        trial[s - 1] = new;
        prev = new;
    }
    if accept(dtau * delta, rng) {
        let x = poly.positions_mut();
        for s in 1..ell {
            x[(start + s) % m] = trial[s - 1];
        }
        true
    } else {
        false
    }
}
