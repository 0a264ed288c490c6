use std::path::PathBuf;

use clap::Args;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use pseudospin::dephasing::{
    char_poly_roots, dephasing_closed_form, dephasing_steady_state, evolve_pure,
    sector_generator, superposition_state, CharPolyRoots, DephasingParams, Sector,
};
use pseudospin::linalg::expm;
use pseudospin::{Error, Result, C64};

use super::{apply_config, fmt_f64, Format, OutputSink};

#[derive(Args, Serialize, Deserialize)]
#[serde(default)]
pub struct DephasingArgs {
    /// Dephasing rate in units of g.
    #[arg(long, default_value_t = 1.0)]
    pub phi: f64,

    /// Detuning in units of g.
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,

    #[arg(long, default_value_t = 1.0)]
    pub g: f64,

    /// Initial superposition angle: cos(theta)|up,n> + e^(i alpha) sin(theta)|down,m>.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
    pub theta: f64,

    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,

    /// Photon count of the excited component.
    #[arg(long, default_value_t = 0)]
    pub n: u64,

    /// Photon count of the ground component.
    #[arg(long, default_value_t = 1)]
    pub m: u64,

    /// Final time for the steady-state comparison (defaults to 50/phi).
    #[arg(long)]
    pub t_end: Option<f64>,

    #[arg(long, default_value_t = 200)]
    pub t_points: usize,

    /// Emit the density-matrix trajectory as CSV instead of the check report.
    #[arg(long, default_value_t = false)]
    pub trajectory: bool,
}

impl Default for DephasingArgs {
    fn default() -> Self {
        DephasingArgs {
            phi: 1.0,
            delta: 0.0,
            g: 1.0,
            theta: std::f64::consts::FRAC_PI_4,
            alpha: 0.0,
            n: 0,
            m: 1,
            t_end: None,
            t_points: 200,
        trajectory: false,
        }
    }
}

#[derive(Serialize)]
struct DephasingReport {
    params: DephasingParams,
    /// Closed form against `exp(H t)` over sectors `(n1, n2) <= (4, 4)` and a
    /// time grid (resonant runs only).
    closed_form_max_deviation: Option<f64>,
    /// Entrywise deviation of the evolved state from the infinite-time
    /// formula at `t_end`.
    steady_state_max_deviation: f64,
    steady_state_time: f64,
    char_poly: CharPolyRoots,
}

pub fn run(args: DephasingArgs, config: &Option<PathBuf>, sink: &OutputSink) -> Result<()> {
    let args = apply_config(args, config)?;
    let params = DephasingParams::new(args.g, args.delta, args.phi)?;
    if args.phi <= 0.0 {
        return Err(Error::Domain("the dephasing report needs phi > 0".into()));
    }
    let t_end = args.t_end.unwrap_or(50.0 / (args.phi * args.g));

    let fock = ((args.n + 2).max(args.m + 2)) as usize;
    let initial = superposition_state(args.theta, args.alpha, args.n, args.m, fock);

    if args.trajectory {
        let content = trajectory_csv(&initial, fock, params, t_end, args.t_points, sink.format)?;
        sink.write(&content)?;
        return Ok(());
    }

    // Closed form vs numeric exponential, resonant case.
    let closed_form_max_deviation = if args.delta == 0.0 {
        let mut worst: f64 = 0.0;
        for n1 in -1i64..=4 {
            for n2 in -1i64..=4 {
                let sector = Sector { n1, n2 };
                for step in 1..=5 {
                    let t = t_end.min(20.0) * step as f64 / 5.0;
                    let closed = dephasing_closed_form(params, sector, t)?;
                    let numeric =
                        expm(&sector_generator(params, sector).scale(Complex64::new(t, 0.0)))?;
                    worst = worst.max(closed.max_abs_diff(&numeric));
                }
            }
        }
        Some(worst)
    } else {
        None
    };

    // Steady state against long-time evolution (resonant solver).
    let steady_state_max_deviation = if args.delta == 0.0 {
        let evolved = evolve_pure(&initial, fock, params, t_end)?;
        let steady = dephasing_steady_state(args.theta, args.alpha, args.n, args.m, params)?;
        let mut worst: f64 = 0.0;
        for r in 0..2 * fock {
            let (qr, pr) = (r / fock, r % fock);
            for c in 0..2 * fock {
                let (qc, pc) = (c / fock, c % fock);
                let expect = if pr < steady.fock_dim && pc < steady.fock_dim {
                    steady.matrix[(qr * steady.fock_dim + pr, qc * steady.fock_dim + pc)]
                } else {
                    Complex64::new(0.0, 0.0)
                };
                worst = worst.max((evolved.matrix[(r, c)] - expect).norm());
            }
        }
        worst
    } else {
        f64::NAN
    };

    let char_poly = char_poly_roots(params, args.n, args.m)?;
    let report = DephasingReport {
        params,
        closed_form_max_deviation,
        steady_state_max_deviation,
        steady_state_time: t_end,
        char_poly,
    };
    sink.write(&super::to_pretty_json(&report)?)?;

    if let Some(dev) = report.closed_form_max_deviation {
        if dev > 1e-8 {
            return Err(Error::Protocol(format!("closed form deviates by {dev}")));
        }
    }
    if report.steady_state_max_deviation.is_finite() && report.steady_state_max_deviation > 1e-6 {
        return Err(Error::Protocol(format!(
            "steady state deviates by {} at t = {}",
            report.steady_state_max_deviation, report.steady_state_time
        )));
    }
    if report.char_poly.det_residual > 1e-9 {
        return Err(Error::Protocol(format!(
            "characteristic roots deviate from the sector matrix by {}",
            report.char_poly.det_residual
        )));
    }
    Ok(())
}

fn trajectory_csv(
    initial: &[C64],
    fock: usize,
    params: DephasingParams,
    t_end: f64,
    points: usize,
    format: Format,
) -> Result<String> {
    if points < 2 {
        return Err(Error::Domain("a trajectory needs at least two points".into()));
    }
    let mut rows: Vec<(f64, Vec<f64>, f64, f64)> = Vec::new();
    let dt = t_end / (points - 1) as f64;
    for k in 0..points {
        let t = dt * k as f64;
        let rho = evolve_pure(initial, fock, params, t)?;
        let pops: Vec<f64> = (0..2 * fock).map(|i| rho.matrix[(i, i)].re).collect();
        rows.push((t, pops, rho.trace(), rho.purity()));
    }
    match format {
        Format::Json => super::to_pretty_json(&rows),
        Format::Csv => {
            let mut out = String::from("t");
            for q in ["down", "up"] {
                for p in 0..fock {
                    out.push_str(&format!(",p({q} {p})"));
                }
            }
            out.push_str(",trace,purity\n");
            for (t, pops, trace, purity) in rows {
                out.push_str(&fmt_f64(t));
                for p in pops {
                    out.push(',');
                    out.push_str(&fmt_f64(p));
                }
                out.push_str(&format!(",{},{}\n", fmt_f64(trace), fmt_f64(purity)));
            }
            Ok(out)
        }
    }
}
