use std::path::PathBuf;

use clap::Args;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use pseudospin::basis::build_symmetry_basis;
use pseudospin::blocks::SystemParams;
use pseudospin::dynamics::{
    dft_magnitudes, populations_block, FullSpaceEvolver, InitialState, TimeGrid, TimeSeries,
};
use pseudospin::linalg::vectors;
use pseudospin::{Error, HalfInt, Result};

use super::{apply_config, fmt_f64, parse_halfint, Format, OutputSink};

#[derive(Args, Serialize, Deserialize)]
#[serde(default)]
pub struct PopulationsArgs {
    /// Pseudospin j of the block (block mode).
    #[arg(long, value_parser = parse_halfint, default_value = "3/2")]
    pub j: HalfInt,

    /// Initial ladder position m (block mode).
    #[arg(long, value_parser = parse_halfint, default_value = "-3/2", allow_hyphen_values = true)]
    pub m: HalfInt,

    /// Photon count of the initial state.
    #[arg(long, default_value_t = 4)]
    pub photons: u64,

    /// Evolve the full register instead of one block; requires --bits.
    #[arg(long, default_value_t = false)]
    pub full_space: bool,

    /// Initial computational bitstring for full-space mode (qubit 0 first).
    #[arg(long)]
    pub bits: Option<String>,

    /// Emit the discrete spectrum of the first population column instead of
    /// the raw series.
    #[arg(long, default_value_t = false)]
    pub spectrum: bool,

    /// Dump the sector propagator at this time instead of a series
    /// (block mode; rows are `t, row, col, re, im`).
    #[arg(long)]
    pub dump_propagator: Option<f64>,

    #[arg(long, default_value_t = 1.0)]
    pub g: f64,

    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,

    #[arg(long, default_value_t = 0.0)]
    pub t_start: f64,

    #[arg(long, default_value_t = 20.0)]
    pub t_end: f64,

    #[arg(long, default_value_t = 1000)]
    pub t_points: usize,
}

impl Default for PopulationsArgs {
    fn default() -> Self {
        PopulationsArgs {
            j: HalfInt::from_twice(3),
            m: HalfInt::from_twice(-3),
            photons: 4,
            full_space: false,
            bits: None,
            spectrum: false,
            dump_propagator: None,
            g: 1.0,
            delta: 0.0,
            t_start: 0.0,
            t_end: 20.0,
            t_points: 1000,
        }
    }
}

#[derive(Serialize)]
struct SeriesOutput<'a> {
    j: HalfInt,
    m: HalfInt,
    photons: u64,
    params: SystemParams,
    series: &'a pseudospin::dynamics::TimeSeries,
}

pub fn run(args: PopulationsArgs, config: &Option<PathBuf>, sink: &OutputSink) -> Result<()> {
    let args = apply_config(args, config)?;
    let params = SystemParams::new(args.g, args.delta)?;
    let grid = TimeGrid::new(args.t_start, args.t_end, args.t_points)?;

    if let Some(t) = args.dump_propagator {
        let block =
            pseudospin::blocks::BlockHamiltonian::from_initial(args.j, args.m, args.photons, params)?;
        let u = pseudospin::linalg::expm_i(block.matrix(), t)?;
        let content = match sink.format {
            Format::Json => {
                let rows: Vec<(usize, usize, f64, f64)> = (0..u.rows())
                    .flat_map(|r| (0..u.cols()).map(move |c| (r, c)))
                    .map(|(r, c)| (r, c, u[(r, c)].re, u[(r, c)].im))
                    .collect();
                super::to_pretty_json(&rows)?
            }
            Format::Csv => {
                let mut out = String::from("t,row,col,re,im\n");
                for r in 0..u.rows() {
                    for c in 0..u.cols() {
                        out.push_str(&format!(
                            "{},{},{},{},{}\n",
                            fmt_f64(t),
                            r,
                            c,
                            fmt_f64(u[(r, c)].re),
                            fmt_f64(u[(r, c)].im)
                        ));
                    }
                }
                out
            }
        };
        sink.write(&content)?;
        let defect = u.unitarity_defect();
        if defect > 1e-10 {
            return Err(Error::Protocol(format!("propagator not unitary: {defect}")));
        }
        return Ok(());
    }

    let series = if args.full_space {
        let bits = args
            .bits
            .clone()
            .ok_or_else(|| Error::Domain("full-space mode needs --bits".into()))?;
        full_space_series(&bits, args.photons, params, &grid)?
    } else {
        populations_block(args.j, args.m, args.photons, params, &grid)?
    };

    let content = if args.spectrum {
        let spectrum = dft_magnitudes(&series.times, &series.columns[0]);
        match sink.format {
            Format::Json => super::to_pretty_json(&spectrum)?,
            Format::Csv => {
                let mut out = String::from("omega,magnitude\n");
                for (w, m) in spectrum {
                    out.push_str(&format!("{},{}\n", fmt_f64(w), fmt_f64(m)));
                }
                out
            }
        }
    } else {
        match sink.format {
            Format::Json => super::to_pretty_json(&SeriesOutput {
                j: args.j,
                m: args.m,
                photons: args.photons,
                params,
                series: &series,
            })?,
            Format::Csv => series.to_csv(),
        }
    };
    sink.write(&content)?;

    let defect = series.conservation_defect();
    if !args.full_space && defect > 1e-9 {
        return Err(Error::Protocol(format!(
            "sector populations leak probability: defect {defect}"
        )));
    }
    Ok(())
}

/// Populations of the maximal-multiplet ladder states in the sector of the
/// initial product state, from brute-force evolution.
fn full_space_series(
    bits: &str,
    photons: u64,
    params: SystemParams,
    grid: &TimeGrid,
) -> Result<TimeSeries> {
    let n = bits.len();
    let initial = InitialState::Computational {
        bits: bits.to_string(),
        photons,
    };
    let evolver = FullSpaceEvolver::new(n, &initial, params)?;
    let basis = build_symmetry_basis(n)?;
    let j = HalfInt::from_twice(n as i32);
    let excitations = initial.total_excitations(n)?;
    let fock = evolver.fock_dim;

    // Ladder states of the maximal multiplet within this excitation sector.
    let mut targets: Vec<(String, Vec<Complex64>)> = Vec::new();
    let mut tm = j.twice();
    while tm >= -j.twice() {
        let m = HalfInt::from_twice(tm);
        let qubit_exc = ((j.twice() + tm) / 2) as u64;
        if qubit_exc <= excitations {
            let p = (excitations - qubit_exc) as usize;
            if p < fock {
                let col = basis.column_of(j, m, 0).expect("maximal multiplet");
                let mut state = vec![Complex64::new(0.0, 0.0); (1 << n) * fock];
                for (b, amp) in col.iter().enumerate() {
                    state[b * fock + p] = *amp;
                }
                targets.push((format!("p(m={m} n={p})"), state));
            }
        }
        tm -= 2;
    }

    let times = grid.times();
    let mut columns = vec![vec![0.0; times.len()]; targets.len() + 1];
    for (k, &t) in times.iter().enumerate() {
        let state = evolver.evolve(t);
        let mut total = 0.0;
        for (c, (_, target)) in targets.iter().enumerate() {
            let pop = vectors::dot(target, &state).norm_sqr();
            columns[c][k] = pop;
            total += pop;
        }
        columns[targets.len()][k] = total;
    }
    let mut labels: Vec<String> = targets.into_iter().map(|(l, _)| l).collect();
    labels.push("sector_total".into());
    Ok(TimeSeries {
        times,
        labels,
        columns,
    })
}
