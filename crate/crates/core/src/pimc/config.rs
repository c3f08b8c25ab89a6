//! PIMC runs described by `key = value` text.
//!
//! ```text
//! temperature = 1.0      # required
//! mass = 1.0
//! potential = harmonic   # harmonic | double_well | tabulated
//! omega = 1.0            # harmonic
//! height = 1.0           # double_well
//! x_min = 1.0            # double_well
//! table = v.csv          # tabulated: two columns x, V(x)
//! charge = 0.0
//! field = 0.0
//! fields = 0.25, 0.5     # magnitudes for the finite-field polarizability
//! beads = 64
//! sweeps = 100000
//! burn_in = 5000
//! seed = 1
//! chains = 1
//! staging = 16           # default beads/4
//! width = 0.1            # single-bead width, default sqrt(dtau/m)
//! centroid_width = 0.5
//! tune = true
//! ```

use super::moves::MoveSet;
use super::run::RunConfig;
use super::ThermalSystem;
use crate::error::{Error, Result};
use crate::io::{read_numeric_csv, real_table, KeyValues};
use crate::potential::PotentialModel;
use std::path::Path;

#[derive(Debug, Clone)]
pub struct PimcInput {
    pub system: ThermalSystem,
    pub config: RunConfig,
    /// Field magnitudes for the polarizability; empty unless `fields` is set.
    pub fields: Vec<f64>,
}

/// Reads a run description. Relative table paths resolve against `base`.
pub fn parse_run_config(kv: &KeyValues, base: &Path) -> Result<PimcInput> {
    let temperature: f64 = kv.require("temperature")?;
    let mass: f64 = kv.get_or("mass", 1.0)?;
    let kind: String = kv.get_or("potential", "harmonic".to_string())?;
    let potential = match kind.as_str() {
        "harmonic" => PotentialModel::harmonic(mass, kv.get_or("omega", 1.0)?),
        "double_well" => PotentialModel::DoubleWell { height: kv.get_or("height", 1.0)?, x_min: kv.get_or("x_min", 1.0)? },
        "tabulated" => {
            let path: String = kv.require("table")?;
            real_table(&read_numeric_csv(&base.join(path))?)?.into()
        }
        other => return Err(Error::InvalidInput(format!("unknown potential {other:?}"))),
    };
    let system = ThermalSystem::new(mass, potential, temperature)?.with_field(kv.get_or("charge", 0.0)?, kv.get_or("field", 0.0)?)?;

    let beads: usize = kv.get_or("beads", 64)?;
    let mut moves = MoveSet::defaults(beads.max(2), temperature, mass);
    let mut custom = false;
    if let Some(w) = kv.get("width")? {
        moves.single_bead_width = w;
        custom = true;
    }
    if let Some(l) = kv.get("staging")? {
        moves.staging_length = l;
        custom = true;
    }
    if let Some(w) = kv.get("centroid_width")? {
        moves.centroid_width = w;
        custom = true;
    }
    let defaults = RunConfig::default();
    let config = RunConfig {
        beads,
        sweeps: kv.get_or("sweeps", defaults.sweeps)?,
        burn_in: kv.get_or("burn_in", defaults.burn_in)?,
        seed: kv.get_or("seed", defaults.seed)?,
        chains: kv.get_or("chains", defaults.chains)?,
        moves: custom.then_some(moves),
        tune: kv.get_or("tune", true)?,
    };
    config.validate()?;
    let fields = kv.list("fields")?.unwrap_or_default();
    Ok(PimcInput { system, config, fields })
}

impl From<crate::numerics::Table1D<f64>> for PotentialModel {
    fn from(t: crate::numerics::Table1D<f64>) -> Self {
        PotentialModel::Tabulated(t)
    }
}
