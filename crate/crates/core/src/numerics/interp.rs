//! Tabulated one-dimensional functions.

use crate::error::{Error, Result};

/// Piecewise-linear interpolant through sorted abscissae.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1D<V> {
    xs: Vec<f64>,
    ys: Vec<V>,
}

impl<V> Table1D<V>
where
    V: Copy + std::ops::Add<Output = V> + std::ops::Mul<f64, Output = V>,
{
    pub fn new(xs: Vec<f64>, ys: Vec<V>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::InvalidInput("table needs at least two (x, y) rows of equal length".into()));
        }
        if !xs.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput("table abscissae must be strictly increasing".into()));
        }
        Ok(Self { xs, ys })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    pub fn abscissae(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[V] {
        &self.ys
    }

    /// Linear interpolation; constant extrapolation outside the table.
    pub fn eval(&self, x: f64) -> V {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let i = self.xs.partition_point(|&v| v <= x) - 1;
        let t = (x - self.xs[i]) / (self.xs[i + 1] - self.xs[i]);
        self.ys[i] * (1.0 - t) + self.ys[i + 1] * t
    }
}
