//! `abti` command-line drivers.
//!
//! Every subcommand reads its parameters from flags, from a TOML file given
//! with `--config`, or both (flags win). The file holds one table per
//! subcommand with keys spelled like the flags, plus optional top-level
//! `format` and `out`:
//!
//! ```toml
//! format = "json"
//! [heat]
//! h = "pi/32"
//! factor = [0.9, 1.0, 1.1]
//! T = 1.0
//! ```
//!
//! Reports print one `PASS`/`FAIL` line per embedded check on stderr and the
//! process exits with status 1 if any check fails.

mod real;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use abti::experiments::{
    convergence_report, heat_runs, run_appendix_report, run_decay_witness, run_heat_blowup, run_max_order_table,
    run_radius_table, DecayParameters, ExperimentReport, REFERENCE_STEPS,
};
use abti::integrator::IntegratorConfig;
use abti::stability::{root_locus, stability_region, MaxOrderOptions};
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "abti",
    version,
    about = "Stability and convergence experiments for the roots-of-unity Adams-Bashforth integrator"
)]
struct Cli {
    /// Output format (default csv).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// TOML file supplying any parameter not given as a flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectral radius of the stability matrix on a grid of the z-plane.
    Region(RegionArgs),
    /// Root locus curve of the characteristic polynomial.
    Locus(LocusArgs),
    /// Parabolic radii for a list of orders.
    Radius(RadiusArgs),
    /// Largest order keeping a given parabolic radius.
    MaxOrder(MaxOrderArgs),
    /// Decay band of N·|p_N| on (-r, 0].
    Decay(DecayArgs),
    /// Allen-Cahn convergence table.
    ConvergeOde(ConvergeArgs),
    /// Heat equation amplification radius, blow-up and L2 check.
    Heat(HeatArgs),
    /// Seeded algebraic witnesses for the characteristic polynomial.
    VerifyAppendix(AppendixArgs),
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
struct RegionArgs {
    #[arg(long)]
    q: Option<usize>,
    /// Node count (default q + 1).
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    alpha: Option<Real>,
    #[arg(long, allow_hyphen_values = true)]
    re_min: Option<Real>,
    #[arg(long, allow_hyphen_values = true)]
    re_max: Option<Real>,
    #[arg(long, allow_hyphen_values = true)]
    im_min: Option<Real>,
    #[arg(long, allow_hyphen_values = true)]
    im_max: Option<Real>,
    /// Points per axis.
    #[arg(long)]
    resolution: Option<usize>,
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
struct LocusArgs {
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    alpha: Option<Real>,
    /// Number of angles on [-pi, pi).
    #[arg(long)]
    n_theta: Option<usize>,
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
struct RadiusArgs {
    #[arg(long, value_delimiter = ',')]
    orders: Option<Vec<usize>>,
    /// 1 for s = q, 0 for s > q.
    #[arg(long)]
    delta: Option<u8>,
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
struct MaxOrderArgs {
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<Real>>,
    /// Positivity floor for p_n on the grid.
    #[arg(long)]
    tol: Option<Real>,
    #[arg(long)]
    delta: Option<u8>,
    #[arg(long)]
    cap: Option<usize>,
    /// Skip the Fourier cross-check.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    no_cross_check: Option<bool>,
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
struct DecayArgs {
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    radius: Option<Real>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    delta: Option<u8>,
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
struct ConvergeArgs {
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    /// Doubling sequence of step counts.
    #[arg(long, value_delimiter = ',')]
    steps: Option<Vec<usize>>,
    #[arg(long)]
    eps: Option<Real>,
    #[arg(long)]
    u0: Option<Real>,
    #[arg(long = "T")]
    #[serde(rename = "T")]
    t_final: Option<Real>,
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
struct HeatArgs {
    #[arg(long)]
    h: Option<Real>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    /// Multiples of the CFL step.
    #[arg(long, value_delimiter = ',')]
    factor: Option<Vec<Real>>,
    #[arg(long = "T")]
    #[serde(rename = "T")]
    t_final: Option<Real>,
    /// Directory for per-factor `t,x,u` trajectories.
    #[arg(long)]
    states_dir: Option<PathBuf>,
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
struct AppendixArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    draws: Option<usize>,
    #[arg(long)]
    tol: Option<Real>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
struct ConfigFile {
    format: Option<Format>,
    out: Option<PathBuf>,
    region: Option<RegionArgs>,
    locus: Option<LocusArgs>,
    radius: Option<RadiusArgs>,
    max_order: Option<MaxOrderArgs>,
    decay: Option<DecayArgs>,
    converge_ode: Option<ConvergeArgs>,
    heat: Option<HeatArgs>,
    verify_appendix: Option<AppendixArgs>,
}

/// Fills every unset flag from the config table.
macro_rules! fill {
    ($args:expr, $file:expr; $($field:ident),+) => {
        if let Some(mut file) = $file {
            $( if $args.$field.is_none() { $args.$field = file.$field.take(); } )+
        }
    };
}

fn real_or(v: Option<Real>, default: f64) -> f64 {
    v.map_or(default, |r| r.0)
}

fn load_config(path: Option<&Path>) -> Result<ConfigFile> {
    let Some(path) = path else { return Ok(ConfigFile::default()) };
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

struct Output {
    format: Format,
    out: Option<PathBuf>,
}

impl Output {
    fn writer(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
            None => Box::new(io::stdout().lock()),
        })
    }

    /// Writes the report and returns whether every check passed.
    fn report(&self, report: &ExperimentReport) -> Result<bool> {
        let mut w = self.writer()?;
        match self.format {
            Format::Csv => report.write_csv(&mut w)?,
            Format::Json => {
                report.write_json(&mut w)?;
                writeln!(w)?;
            }
        }
        w.flush()?;
        for c in &report.checks {
            eprintln!(
                "{} {}: observed {} target {} ({:?} tol {})",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.observed,
                c.target,
                c.kind,
                c.tolerance
            );
        }
        Ok(report.passed())
    }
}

fn delta_for(q: usize, s: usize) -> Result<u8> {
    if q == 0 || s < q {
        bail!("need 1 <= q <= s, got q = {q}, s = {s}");
    }
    Ok(u8::from(s == q))
}

fn run(cli: Cli) -> Result<bool> {
    let mut file = load_config(cli.config.as_deref())?;
    let output = Output { format: cli.format.or(file.format).unwrap_or(Format::Csv), out: cli.out.or(file.out.take()) };
    match cli.command {
        Command::Region(mut a) => {
            fill!(a, file.region; q, s, alpha, re_min, re_max, im_min, im_max, resolution);
            let q = a.q.unwrap_or(3);
            let s = a.s.unwrap_or(q + 1);
            let cfg = IntegratorConfig::new(q, s, real_or(a.alpha, 1.0), 1.0)?;
            let n = a.resolution.unwrap_or(201);
            let grid = stability_region(
                &cfg,
                (real_or(a.re_min, -3.0), real_or(a.re_max, 1.0)),
                (real_or(a.im_min, -2.0), real_or(a.im_max, 2.0)),
                (n, n),
            )?;
            let mut w = output.writer()?;
            match output.format {
                Format::Csv => grid.write_csv(&mut w)?,
                Format::Json => grid.write_json(&mut w)?,
            }
            w.flush()?;
            eprintln!("stable fraction {:.6}", grid.stable_fraction());
            Ok(true)
        }
        Command::Locus(mut a) => {
            fill!(a, file.locus; q, s, alpha, n_theta);
            let q = a.q.unwrap_or(3);
            let s = a.s.unwrap_or(q + 1);
            let curve = root_locus(q, real_or(a.alpha, 1.0), delta_for(q, s)?, a.n_theta.unwrap_or(512))?;
            let mut w = output.writer()?;
            match output.format {
                Format::Csv => {
                    writeln!(w, "branch,theta,re,im")?;
                    for b in 0..curve.n_branches() {
                        for (theta, z) in curve.thetas.iter().zip(curve.branch(b)) {
                            writeln!(w, "{b},{theta},{},{}", z.re, z.im)?;
                        }
                    }
                }
                Format::Json => {
                    serde_json::to_writer_pretty(&mut w, &curve)?;
                    writeln!(w)?;
                }
            }
            w.flush()?;
            Ok(true)
        }
        Command::Radius(mut a) => {
            fill!(a, file.radius; orders, delta);
            let orders = a.orders.unwrap_or_else(|| vec![1, 2, 4, 6, 8, 10]);
            output.report(&run_radius_table(&orders, a.delta.unwrap_or(0))?)
        }
        Command::MaxOrder(mut a) => {
            fill!(a, file.max_order; radii, tol, delta, cap, no_cross_check);
            let radii: Vec<f64> = a
                .radii
                .map(|v| v.into_iter().map(|r| r.0).collect())
                .unwrap_or_else(|| vec![0.6, 0.5, 0.4, (-1.0f64).exp(), 0.3]);
            let defaults = MaxOrderOptions::default();
            let opts = MaxOrderOptions {
                delta_q: a.delta.unwrap_or(0),
                positivity_floor: real_or(a.tol, defaults.positivity_floor),
                cap: a.cap.unwrap_or(defaults.cap),
                cross_check: !a.no_cross_check.unwrap_or(false),
                ..defaults
            };
            output.report(&run_max_order_table(&radii, &opts)?)
        }
        Command::Decay(mut a) => {
            fill!(a, file.decay; n_min, n_max, radius, grid, delta);
            let d = DecayParameters::default();
            let p = DecayParameters {
                n_min: a.n_min.unwrap_or(d.n_min),
                n_max: a.n_max.unwrap_or(d.n_max),
                radius: real_or(a.radius, d.radius),
                grid_points: a.grid.unwrap_or(d.grid_points),
                delta_q: a.delta.unwrap_or(d.delta_q),
            };
            output.report(&run_decay_witness(&p))
        }
        Command::ConvergeOde(mut a) => {
            fill!(a, file.converge_ode; q, s, steps, eps, u0, t_final);
            let q = a.q.unwrap_or(2);
            let s = a.s.unwrap_or(q + 1);
            let steps = a.steps.unwrap_or_else(|| REFERENCE_STEPS.to_vec());
            let report =
                convergence_report(q, s, &steps, real_or(a.eps, 0.5), real_or(a.u0, 0.01), real_or(a.t_final, 1.0))?;
            output.report(&report)
        }
        Command::Heat(mut a) => {
            fill!(a, file.heat; h, q, s, factor, t_final, states_dir);
            let h = real_or(a.h, std::f64::consts::PI / 32.0);
            let q = a.q.unwrap_or(2);
            let s = a.s.unwrap_or(q + 1);
            let factors: Vec<f64> =
                a.factor.map(|v| v.into_iter().map(|r| r.0).collect()).unwrap_or_else(|| vec![0.9, 1.0, 1.1]);
            let t_final = real_or(a.t_final, 1.0);
            if let Some(dir) = &a.states_dir {
                std::fs::create_dir_all(dir)?;
                for run in heat_runs(h, q, s, &factors, t_final)? {
                    let path = dir.join(format!("heat_factor_{}.csv", run.factor));
                    run.free.write_csv(BufWriter::new(File::create(&path)?))?;
                }
            }
            output.report(&run_heat_blowup(h, q, s, &factors, t_final)?)
        }
        Command::VerifyAppendix(mut a) => {
            fill!(a, file.verify_appendix; seed, draws, tol);
            let report = run_appendix_report(a.seed.unwrap_or(0), a.draws.unwrap_or(100), real_or(a.tol, 1e-10))?;
            output.report(&report)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
