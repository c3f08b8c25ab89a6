//! Plain-text inputs: key = value configs and numeric CSV tables.

use crate::error::{Error, Result};
use crate::numerics::Table1D;
use num_complex::Complex64;
use std::cell::RefCell;
use std::collections::BTreeSet;
use std::path::Path;
use std::str::FromStr;

/// Parsed `key = value` lines. `#` starts a comment; blank lines are skipped.
///
/// Every key must be read before [`KeyValues::finish`], which turns unknown
/// keys (usually typos) into errors.
#[derive(Debug, Default)]
pub struct KeyValues {
    entries: Vec<(String, String)>,
    used: RefCell<BTreeSet<String>>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<(String, String)> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("line {}: expected key = value, got {line:?}", n + 1)))?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if k.is_empty() {
                return Err(Error::InvalidInput(format!("line {}: empty key", n + 1)));
            }
            if entries.iter().any(|(e, _)| *e == k) {
                return Err(Error::InvalidInput(format!("line {}: duplicate key {k}", n + 1)));
            }
            entries.push((k, v));
        }
        Ok(Self { entries, used: RefCell::new(BTreeSet::new()) })
    }

    /// Later pairs override earlier ones (used for `--config key=value` on top of a file).
    pub fn insert(&mut self, key: &str, value: &str) {
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(e) => e.1 = value.to_string(),
            None => self.entries.push((key.to_string(), value.to_string())),
        }
    }

    /// All pairs in file order, without marking them as read.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.used.borrow_mut().insert(key.to_string());
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| Error::InvalidInput(format!("{key}: cannot parse {v:?}"))),
        }
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?.ok_or_else(|| Error::InvalidInput(format!("missing required key {key}")))
    }

    /// Comma-separated list.
    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| Error::InvalidInput(format!("{key}: cannot parse {s:?}"))))
                .collect::<Result<Vec<T>>>()
                .map(Some),
        }
    }

    pub fn finish(&self) -> Result<()> {
        let used = self.used.borrow();
        let unknown: Vec<&str> = self.entries.iter().map(|(k, _)| k.as_str()).filter(|k| !used.contains(*k)).collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("unknown keys: {}", unknown.join(", "))))
        }
    }
}

/// Rows of numbers from comma-separated text. `#` lines are comments and a
/// first non-numeric row is treated as a header.
pub fn parse_numeric_csv(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = line.split(',').map(|c| c.trim().parse::<f64>()).collect();
        match parsed {
            Ok(r) => {
                if let Some(first) = rows.first().map(|f: &Vec<f64>| f.len()) {
                    if r.len() != first {
                        return Err(Error::InvalidInput(format!("line {}: expected {first} columns, got {}", n + 1, r.len())));
                    }
                }
                rows.push(r)
            }
            Err(_) if rows.is_empty() => continue,
            Err(_) => return Err(Error::InvalidInput(format!("line {}: non-numeric field in {line:?}", n + 1))),
        }
    }
    if rows.is_empty() {
        return Err(Error::InvalidInput("table has no numeric rows".into()));
    }
    Ok(rows)
}

pub fn read_numeric_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_numeric_csv(&text)
}

fn column_check(rows: &[Vec<f64>], needed: usize) -> Result<()> {
    if rows[0].len() < needed {
        return Err(Error::InvalidInput(format!("table needs {needed} columns, got {}", rows[0].len())));
    }
    Ok(())
}

/// (x, y) table from the first two columns.
pub fn real_table(rows: &[Vec<f64>]) -> Result<Table1D<f64>> {
    column_check(rows, 2)?;
    Table1D::new(rows.iter().map(|r| r[0]).collect(), rows.iter().map(|r| r[1]).collect())
}

/// (t, Re, Im) table from column 0 and columns `re_col`, `re_col + 1`.
pub fn complex_table(rows: &[Vec<f64>], re_col: usize) -> Result<Table1D<Complex64>> {
    column_check(rows, re_col + 2)?;
    Table1D::new(rows.iter().map(|r| r[0]).collect(), rows.iter().map(|r| Complex64::new(r[re_col], r[re_col + 1])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_values_roundtrip() {
        let kv = KeyValues::parse("# run\ntemperature = 1.5\nbeads=32 # inline\nfields = 0.1, 0.2\n").unwrap();
        assert_eq!(kv.require::<f64>("temperature").unwrap(), 1.5);
        assert_eq!(kv.get_or::<usize>("beads", 8).unwrap(), 32);
        assert_eq!(kv.list::<f64>("fields").unwrap().unwrap(), vec![0.1, 0.2]);
        assert_eq!(kv.get_or::<u64>("seed", 9).unwrap(), 9);
        kv.finish().unwrap();
    }

    #[test]
    fn key_value_errors() {
        assert!(KeyValues::parse("a = 1\na = 2").is_err());
        assert!(KeyValues::parse("novalue").is_err());
        let kv = KeyValues::parse("tempratur = 1").unwrap();
        assert!(kv.require::<f64>("temperature").is_err());
        assert!(kv.finish().is_err());
        let kv = KeyValues::parse("beads = many").unwrap();
        assert!(kv.get::<usize>("beads").is_err());
    }

    #[test]
    fn csv_with_header_and_comments() {
        let rows = parse_numeric_csv("# comment\nt,re,im\n0,1,2\n1,3,4\n").unwrap();
        assert_eq!(rows, vec![vec![0.0, 1.0, 2.0], vec![1.0, 3.0, 4.0]]);
        let t = complex_table(&rows, 1).unwrap();
        assert_eq!(t.eval(0.5), Complex64::new(2.0, 3.0));
        assert!(parse_numeric_csv("0,1\n1,2,3\n").is_err());
        assert!(parse_numeric_csv("").is_err());
    }
}
