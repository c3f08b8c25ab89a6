//! Sequence acceleration.

use num_complex::Complex64;

/// Output of [`wynn_epsilon`].
#[derive(Debug, Clone, Copy)]
pub struct Extrapolation {
    pub value: Complex64,
    /// Difference between the two highest even-order estimates.
    pub error: f64,
}

/// Wynn's ε-algorithm applied to a sequence of partial sums.
pub fn wynn_epsilon(partial: &[Complex64]) -> Extrapolation {
    let n = partial.len();
    assert!(n >= 1);
    if n < 3 {
        let v = partial[n - 1];
        let e = if n == 2 { (partial[1] - partial[0]).norm() } else { f64::INFINITY };
        return Extrapolation { value: v, error: e };
    }
    // prev2 = column k-2, prev = column k-1; column index 0 is the zero column
    let mut prev2 = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut prev: Vec<Complex64> = partial.to_vec();
    let mut best = partial[n - 1];
    let mut best_prev = partial[n - 2];
    let mut order = 0usize;
    while prev.len() > 1 {
        let mut next = Vec::with_capacity(prev.len() - 1);
        for i in 0..prev.len() - 1 {
            let d = prev[i + 1] - prev[i];
            if d.norm() == 0.0 {
                // sequence has converged exactly in this column
                return Extrapolation { value: prev[i + 1], error: 0.0 };
            }
            next.push(prev2[i + 1] + d.inv());
        }
        order += 1;
        if order.is_multiple_of(2) {
            best_prev = best;
            best = next[next.len() - 1];
        }
        prev2 = prev;
        prev = next;
    }
    Extrapolation { value: best, error: (best - best_prev).norm() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accelerates_alternating_log_series() {
        let mut s = Complex64::new(0.0, 0.0);
        let mut partial = Vec::new();
        for k in 1..=20 {
            s += Complex64::new(if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64, 0.0);
            partial.push(s);
        }
        let r = wynn_epsilon(&partial);
        assert!((r.value.re - std::f64::consts::LN_2).abs() < 1e-12, "{:?}", r);
        assert!(r.error < 1e-9);
    }

    #[test]
    fn exact_sequence_short_circuits() {
        let p = vec![Complex64::new(1.0, 1.0); 5];
        let r = wynn_epsilon(&p);
        assert_eq!(r.value, Complex64::new(1.0, 1.0));
    }
}
