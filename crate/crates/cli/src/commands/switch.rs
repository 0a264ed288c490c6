use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};

use pseudospin::blocks::SystemParams;
use pseudospin::gates::{
    circuit_from_solution, dft_switch_k1, fixture_circuit, solve_switch, switch_protocol, Circuit,
    FixtureId, SwitchProtocolTrace, SwitchSolution,
};
use pseudospin::Result;

use super::{apply_config, OutputSink};

#[derive(Args, Serialize, Deserialize)]
#[serde(default)]
pub struct SwitchArgs {
    /// Register size.
    #[arg(long, default_value_t = 3)]
    pub n_qubits: usize,

    /// Excitations to drop from the maximal pseudospin, `j -> j - k`.
    #[arg(long, default_value_t = 1)]
    pub k: usize,

    /// Root-of-unity branch for k = 1 solutions.
    #[arg(long, default_value_t = 1)]
    pub branch: usize,

    /// Seed for the randomized kernel-search fallback.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Emit a published fixture circuit instead of solving.
    #[arg(long)]
    pub fixture: Option<String>,

    /// Skip the end-to-end protocol and only emit the solution and circuit.
    #[arg(long, default_value_t = false)]
    pub solution_only: bool,

    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
}

impl Default for SwitchArgs {
    fn default() -> Self {
        SwitchArgs {
            n_qubits: 3,
            k: 1,
            branch: 1,
            seed: 0,
            fixture: None,
            solution_only: false,
            g: 1.0,
        }
    }
}

#[derive(Serialize)]
struct SwitchOutput {
    solution: Option<SwitchSolution>,
    circuit: Circuit,
    trace: Option<SwitchProtocolTrace>,
}

pub fn run(args: SwitchArgs, config: &Option<PathBuf>, sink: &OutputSink) -> Result<()> {
    let args = apply_config(args, config)?;

    if let Some(name) = &args.fixture {
        let id: FixtureId = name.parse()?;
        let circuit = fixture_circuit(id);
        sink.write(&super::to_pretty_json(&SwitchOutput {
            solution: None,
            circuit,
            trace: None,
        })?)?;
        return Ok(());
    }

    let solution = if args.k == 1 {
        dft_switch_k1(args.n_qubits, args.branch)?
    } else {
        solve_switch(args.n_qubits, args.k, args.seed)?
    };
    let circuit = circuit_from_solution(&solution);
    let trace = if args.solution_only {
        None
    } else {
        let params = SystemParams::resonant(args.g)?;
        Some(switch_protocol(args.n_qubits, args.k, params, args.seed)?)
    };
    sink.write(&super::to_pretty_json(&SwitchOutput {
        solution: Some(solution),
        circuit,
        trace,
    })?)?;
    Ok(())
}
