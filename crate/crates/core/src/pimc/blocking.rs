//! Error bars for correlated samples by repeated pairwise block averaging
//! (Flyvbjerg–Petersen).

/// Naive standard error of the mean at one blocking level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockingLevel {
    pub blocks: usize,
    pub std_error: f64,
    /// Uncertainty of `std_error` itself, σ/√(2(n − 1)).
    pub std_error_uncertainty: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockingReport {
    pub mean: f64,
    pub std_error: f64,
    /// τ = ½(σ²_plateau / σ²_naive), in units of the sample spacing.
    pub autocorrelation_time: f64,
    pub samples: usize,
    /// False when no plateau was found; `std_error` is then the largest level
    /// estimate and should not be trusted.
    pub plateau: bool,
    pub levels: Vec<BlockingLevel>,
}

/// Fewest blocks a level may have and still enter the plateau search.
const MIN_BLOCKS: usize = 32;

pub fn blocking_analysis(samples: &[f64]) -> BlockingReport {
    let n = samples.len();
    let mean = if n == 0 { f64::NAN } else { samples.iter().sum::<f64>() / n as f64 };
    let mut levels = Vec::new();
    let mut data = samples.to_vec();
    while data.len() >= 2 {
        let len = data.len();
        let m = data.iter().sum::<f64>() / len as f64;
        let var = data.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (len as f64 - 1.0);
        let se = (var / len as f64).sqrt();
        levels.push(BlockingLevel { blocks: len, std_error: se, std_error_uncertainty: se / (2.0 * (len as f64 - 1.0)).sqrt() });
        data = data.chunks_exact(2).map(|c| 0.5 * (c[0] + c[1])).collect();
    }
    if levels.is_empty() {
        return BlockingReport { mean, std_error: f64::NAN, autocorrelation_time: f64::NAN, samples: n, plateau: false, levels };
    }

    // Plateau: the first level whose estimate is consistent, within its own
    // uncertainty, with every later level that still has enough blocks.
    let usable: Vec<&BlockingLevel> = levels.iter().filter(|l| l.blocks >= MIN_BLOCKS).collect();
    let mut chosen = None;
    for (i, level) in usable.iter().enumerate() {
        let later = &usable[i..];
        if later.len() < 3 {
            break;
        }
        let consistent = later.iter().all(|l| {
            let tol = 2.0 * (level.std_error_uncertainty.powi(2) + l.std_error_uncertainty.powi(2)).sqrt();
            (l.std_error - level.std_error).abs() <= tol
        });
        if consistent {
            chosen = Some(later.iter().take(3).map(|l| l.std_error).fold(0.0, f64::max));
            break;
        }
    }
    let plateau = chosen.is_some();
    let std_error = chosen.unwrap_or_else(|| levels.iter().map(|l| l.std_error).fold(0.0, f64::max));
    let naive = levels[0].std_error;
    let autocorrelation_time = if naive > 0.0 { 0.5 * (std_error / naive).powi(2) } else { 0.5 };
    BlockingReport { mean, std_error, autocorrelation_time, samples: n, plateau, levels }
}
