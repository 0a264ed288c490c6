use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};

use pseudospin::blocks::SystemParams;
use pseudospin::decay::{decay_recovery_protocol, decay_spectroscopy};
use pseudospin::{Error, Result};

use super::{apply_config, OutputSink};

#[derive(Args, Serialize, Deserialize)]
#[serde(default)]
pub struct DecayArgs {
    /// Register size.
    #[arg(long, default_value_t = 3)]
    pub n_qubits: usize,

    /// Emit the spectroscopy report of a decayed many-photon state instead of
    /// the recovery tree (three-qubit register).
    #[arg(long, default_value_t = false)]
    pub spectroscopy: bool,

    /// Initial photon count for the spectroscopy mode.
    #[arg(long, default_value_t = 3)]
    pub photons: u64,

    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
}

impl Default for DecayArgs {
    fn default() -> Self {
        DecayArgs {
            n_qubits: 3,
            spectroscopy: false,
            photons: 3,
            g: 1.0,
        }
    }
}

pub fn run(args: DecayArgs, config: &Option<PathBuf>, sink: &OutputSink) -> Result<()> {
    let args = apply_config(args, config)?;
    let params = SystemParams::resonant(args.g)?;

    if args.spectroscopy {
        let report = decay_spectroscopy(args.photons, params)?;
        sink.write(&super::to_pretty_json(&report)?)?;
        let total: f64 = report.sectors.iter().map(|s| s.weight).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Protocol(format!(
                "sector weights sum to {total}, expected 1"
            )));
        }
        return Ok(());
    }

    let tree = decay_recovery_protocol(args.n_qubits, params)?;
    sink.write(&super::to_pretty_json(&tree)?)?;
    if tree.probability_defect() > 1e-12 {
        return Err(Error::Protocol(format!(
            "branch probabilities leak: defect {}",
            tree.probability_defect()
        )));
    }
    Ok(())
}
