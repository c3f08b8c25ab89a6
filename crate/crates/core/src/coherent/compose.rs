//! Monte Carlo check of the composition law
//! (1/π)∫d²α_c K(α_b; α_c) K(α_c; α_a) = K(α_b; α_a).

use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

/// Fixed shard count so results do not depend on the thread pool size.
const SHARDS: u64 = 64;

/// Complex Gaussian proposal with density e^{−|α − center|²/σ²}/(πσ²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianProposal {
    pub center: Complex64,
    pub width: f64,
}

impl Default for GaussianProposal {
    fn default() -> Self {
        Self { center: Complex64::default(), width: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositionEstimate {
    pub value: Complex64,
    /// Standard error of the real and imaginary parts combined, |σ_re + iσ_im|.
    pub std_error: f64,
    pub samples: u64,
}

/// Estimates (1/π)∫d²α_c outer(α_c) inner(α_c) by importance sampling.
///
/// `outer(α_c) = K(α_b, t_b; α_c, t_c)` and `inner(α_c) = K(α_c, t_c; α_a, t_a)`.
/// Each of the 64 shards draws from its own ChaCha8 stream of `seed`; shard
/// sums are reduced in shard order.
pub fn compose_monte_carlo<O, N>(outer: O, inner: N, samples: u64, seed: u64, proposal: GaussianProposal) -> Result<CompositionEstimate>
where
    O: Fn(Complex64) -> Complex64 + Sync,
    N: Fn(Complex64) -> Complex64 + Sync,
{
    if samples < 2 {
        return Err(Error::InvalidInput("composition needs at least two samples".into()));
    }
    if !(proposal.width > 0.0) {
        return Err(Error::InvalidInput(format!("proposal width must be positive, got {}", proposal.width)));
    }
    let sigma = proposal.width;
    let per = samples / SHARDS;
    let extra = samples % SHARDS;
    let sums: Vec<[f64; 4]> = (0..SHARDS)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let n = per + u64::from(shard < extra);
            let mut acc = [0.0; 4];
            for _ in 0..n {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                let offset = Complex64::new(re, im) * (sigma / std::f64::consts::SQRT_2);
                let alpha = proposal.center + offset;
                // (1/π) f / [e^{−|offset|²/σ²}/(πσ²)]
                let weight = sigma * sigma * (offset.norm_sqr() / (sigma * sigma)).exp();
                let v = outer(alpha) * inner(alpha) * weight;
                acc[0] += v.re;
                acc[1] += v.im;
                acc[2] += v.re * v.re;
                acc[3] += v.im * v.im;
            }
            acc
        })
        .collect();
    let mut total = [0.0; 4];
    for s in &sums {
        for k in 0..4 {
            total[k] += s[k];
        }
    }
    let n = samples as f64;
    let mean = Complex64::new(total[0] / n, total[1] / n);
    let var_re = (total[2] / n - mean.re * mean.re).max(0.0) / (n - 1.0);
    let var_im = (total[3] / n - mean.im * mean.im).max(0.0) / (n - 1.0);
    Ok(CompositionEstimate { value: mean, std_error: (var_re + var_im).sqrt(), samples })
}
