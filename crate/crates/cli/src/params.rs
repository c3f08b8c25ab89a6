//! Parameter resolution: command-line flag, then config file, then default.

use feynpath::io::KeyValues;
use feynpath::{Error, Result};
use num_complex::Complex64;
use std::fmt::Display;
use std::str::FromStr;

/// Resolves parameters and records the values actually used.
///
/// Config-file keys are the long flag names (`grid-points = 512`). Keys left
/// unread at [`Params::finish`] are reported as unknown.
pub struct Params {
    file: KeyValues,
    echoed: Vec<(String, String)>,
}

impl Params {
    pub fn new(file: KeyValues) -> Self {
        Self { file, echoed: Vec::new() }
    }

    pub fn get<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T> {
        let from_file = self.file.get(key)?;
        let v = flag.or(from_file).unwrap_or(default);
        self.echoed.push((key.to_string(), v.to_string()));
        Ok(v)
    }

    pub fn opt<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>> {
        let from_file = self.file.get(key)?;
        let v = flag.or(from_file);
        if let Some(v) = &v {
            self.echoed.push((key.to_string(), v.to_string()));
        }
        Ok(v)
    }

    /// One of a fixed set of words.
    pub fn choice(&mut self, key: &str, flag: Option<String>, default: &str, allowed: &[&str]) -> Result<String> {
        let v = self.get(key, flag, default.to_string())?;
        if allowed.contains(&v.as_str()) {
            Ok(v)
        } else {
            Err(Error::InvalidInput(format!("{key} must be one of {}, got {v:?}", allowed.join(" | "))))
        }
    }

    /// `re,im` pair.
    pub fn complex(&mut self, key: &str, flag: Option<String>, default: &str) -> Result<Complex64> {
        let v = self.get(key, flag, default.to_string())?;
        parse_complex(&v).ok_or_else(|| Error::InvalidInput(format!("{key}: expected re,im, got {v:?}")))
    }

    /// Comma-separated numbers.
    pub fn list(&mut self, key: &str, flag: Option<String>, default: &str) -> Result<Vec<f64>> {
        let v = self.get(key, flag, default.to_string())?;
        v.split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| Error::InvalidInput(format!("{key}: cannot parse {s:?}"))))
            .collect()
    }

    pub fn finish(self) -> Result<Vec<(String, String)>> {
        self.file.finish()?;
        Ok(self.echoed)
    }
}

pub fn parse_complex(s: &str) -> Option<Complex64> {
    let (re, im) = s.split_once(',')?;
    Some(Complex64::new(re.trim().parse().ok()?, im.trim().parse().ok()?))
}

/// `n` evenly spaced points on `[lo, hi]`; a single point sits at `lo`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidInput(format!("cannot sample [{lo}, {hi}] with {n} points")));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}
