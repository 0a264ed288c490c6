use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};

use pseudospin::blocks::{
    analytic_splittings, fit_reference_splittings, BlockHamiltonian, SystemParams,
};
use pseudospin::{Error, HalfInt, Result};

use super::{apply_config, fmt_f64, parse_halfint, Format, OutputSink};

#[derive(Args, Serialize, Deserialize)]
#[serde(default)]
pub struct SplittingsArgs {
    /// Pseudospin j (half-integer, e.g. 3/2).
    #[arg(long, value_parser = parse_halfint, default_value = "1/2")]
    pub j: HalfInt,

    /// Photon count co-resident with the top ladder state.
    #[arg(long, default_value_t = 0)]
    pub n: u64,

    /// Emit a range of photon numbers n..=n_end.
    #[arg(long)]
    pub n_end: Option<u64>,

    /// Coupling strength (frequency unit).
    #[arg(long, default_value_t = 1.0)]
    pub g: f64,

    /// Qubit detuning in units of g.
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
}

impl Default for SplittingsArgs {
    fn default() -> Self {
        SplittingsArgs {
            j: HalfInt::HALF,
            n: 0,
            n_end: None,
            g: 1.0,
            delta: 0.0,
        }
    }
}

#[derive(Serialize)]
struct Row {
    j: HalfInt,
    n: u64,
    index: usize,
    value: f64,
    analytic: Option<f64>,
    analytic_deviation: Option<f64>,
    fit_reference: Option<f64>,
    fit_relative_error: Option<f64>,
}

pub fn run(args: SplittingsArgs, config: &Option<PathBuf>, sink: &OutputSink) -> Result<()> {
    let args = apply_config(args, config)?;
    let params = SystemParams::new(args.g, args.delta)?;
    let n_end = args.n_end.unwrap_or(args.n);
    if n_end < args.n {
        return Err(Error::Domain(format!(
            "empty photon range {}..={}",
            args.n, n_end
        )));
    }

    let mut rows = Vec::new();
    let mut worst_dev: f64 = 0.0;
    for n in args.n..=n_end {
        let block = BlockHamiltonian::full(args.j, n, params)?;
        let numeric = block.eigenvalues()?;
        let analytic = analytic_splittings(args.j, n, params).map(|mut v| {
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            v
        });
        // Positive branch, descending, paired with the shifted fit family.
        let fit = fit_reference_splittings(args.j, n + args.j.twice() as u64);
        let mut positive: Vec<(usize, f64)> = numeric
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, v)| *v > 1e-9)
            .collect();
        positive.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        let fit_of_index = |idx: usize| -> Option<f64> {
            positive
                .iter()
                .position(|&(i, _)| i == idx)
                .and_then(|rank| fit.get(rank).copied())
        };

        for (index, &value) in numeric.iter().enumerate() {
            let a = analytic.as_ref().map(|v| v[index]);
            let dev = a.map(|a| (a - value).abs());
            if let Some(d) = dev {
                worst_dev = worst_dev.max(d);
            }
            let fit_reference = fit_of_index(index);
            let fit_relative_error = fit_reference.map(|f| (value - f).abs() / f.abs().max(1e-300));
            rows.push(Row {
                j: args.j,
                n,
                index,
                value,
                analytic: a,
                analytic_deviation: dev,
                fit_reference,
                fit_relative_error,
            });
        }
    }

    let content = match sink.format {
        Format::Json => super::to_pretty_json(&rows)?,
        Format::Csv => {
            let mut out = String::from(
                "j,n,index,value,analytic,analytic_deviation,fit_reference,fit_relative_error\n",
            );
            for r in rows {
                let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    r.j,
                    r.n,
                    r.index,
                    fmt_f64(r.value),
                    opt(r.analytic),
                    opt(r.analytic_deviation),
                    opt(r.fit_reference),
                    opt(r.fit_relative_error),
                ));
            }
            out
        }
    };
    sink.write(&content)?;

    if worst_dev > 1e-10 {
        return Err(Error::Protocol(format!(
            "analytic and numeric splittings deviate by {worst_dev}"
        )));
    }
    Ok(())
}
