use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};

use pseudospin::basis::{
    basis_residuals, block_diagonalize, build_symmetry_basis, fixture_basis, BasisResiduals,
    BlockReport, SymmetryBasisJson,
};
use pseudospin::blocks::SystemParams;
use pseudospin::multiplet::multiplet_table;
use pseudospin::{Error, Result};

use super::{apply_config, OutputSink};

#[derive(Args, Serialize, Deserialize)]
#[serde(default)]
pub struct DecomposeArgs {
    /// Register size.
    #[arg(long, default_value_t = 3)]
    pub n_qubits: usize,

    /// Fock truncation for the block-diagonalization report.
    #[arg(long, default_value_t = 3)]
    pub n_max: u64,

    /// Use the explicit small-register tables instead of the general
    /// construction (2, 3 or 4 qubits).
    #[arg(long, default_value_t = false)]
    pub fixture: bool,

    #[arg(long, default_value_t = 1.0)]
    pub g: f64,

    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
}

impl Default for DecomposeArgs {
    fn default() -> Self {
        DecomposeArgs {
            n_qubits: 3,
            n_max: 3,
            fixture: false,
            g: 1.0,
            delta: 0.0,
        }
    }
}

#[derive(Serialize)]
struct DecomposeOutput {
    multiplets: Vec<(pseudospin::HalfInt, u128)>,
    residuals: BasisResiduals,
    report: BlockReport,
    basis: SymmetryBasisJson,
}

pub fn run(args: DecomposeArgs, config: &Option<PathBuf>, sink: &OutputSink) -> Result<()> {
    let args = apply_config(args, config)?;
    let params = SystemParams::new(args.g, args.delta)?;
    let basis = if args.fixture {
        fixture_basis(args.n_qubits)?
    } else {
        build_symmetry_basis(args.n_qubits)?
    };
    let residuals = basis_residuals(&basis)?;
    let report = block_diagonalize(params, &basis, args.n_max)?;
    let table = multiplet_table(args.n_qubits)?;

    let output = DecomposeOutput {
        multiplets: table.rows.clone(),
        residuals,
        report,
        basis: basis.to_json(),
    };
    // The decomposition is inherently structured; emit JSON either way.
    sink.write(&super::to_pretty_json(&output)?)?;

    let r = &output.residuals;
    if r.unitarity > 1e-10 || r.j_squared > 1e-9 || r.j_z > 1e-9 || r.ladder > 1e-9 {
        return Err(Error::Protocol(format!("basis residuals above tolerance: {r:?}")));
    }
    if output.report.off_block_max > 1e-10 || output.report.max_sector_deviation > 1e-10 {
        return Err(Error::Protocol(format!(
            "block structure above tolerance: off-block {}, sector {}",
            output.report.off_block_max, output.report.max_sector_deviation
        )));
    }
    for (j, copies) in &output.report.multiplicities {
        let expected = output
            .multiplets
            .iter()
            .find(|(jj, _)| jj == j)
            .map(|(_, ab)| *ab)
            .unwrap_or(0);
        if *copies as u128 != expected {
            return Err(Error::Protocol(format!(
                "j={j} has {copies} copies, expected {expected}"
            )));
        }
    }
    Ok(())
}
