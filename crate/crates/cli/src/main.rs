//! `pcasim`: run scenarios, list and validate presets, run verification.
//!
//! Exit codes: 0 success, 1 solver or I/O failure (or failed verification),
//! 2 usage or configuration error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pcasim_core::observables::Diagnostics;
use pcasim_core::scenario::{parse_config, preset, preset_names, to_config_string, write_snapshot, write_timeseries, Scenario};
use pcasim_core::verification::{report_csv, run_suite, SuiteOptions};
use pcasim_core::Error;

#[derive(Parser)]
#[command(name = "pcasim", version, about = "Phase-field prostate tumor growth simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset or a configuration file and write the time series and snapshots.
    Run {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        overrides: Overrides,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
        /// Suppress per-observation progress on stderr.
        #[arg(long)]
        quiet: bool,
    },
    /// Print the 40 preset names.
    ListPresets,
    /// Print the double-well and supply checks of a scenario.
    Validate {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Print a scenario as a configuration file.
    ShowConfig {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run the verification checks and print a CSV report.
    Verify {
        /// Shorter ladders, no dependence probe.
        #[arg(long)]
        quick: bool,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Preset name, e.g. mild/reference/none.
    #[arg(long)]
    preset: Option<String>,
    /// Scenario configuration file (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct Overrides {
    /// Elements per side.
    #[arg(long)]
    nel: Option<usize>,
    /// Simulated days.
    #[arg(long)]
    horizon: Option<f64>,
    /// Time step [day].
    #[arg(long)]
    dt: Option<f64>,
    /// Time-series cadence [day].
    #[arg(long)]
    timeseries_every: Option<f64>,
    /// Snapshot cadence [day]; 0 disables snapshots.
    #[arg(long)]
    snapshot_every: Option<f64>,
}

enum Failure {
    /// Solver breakdown, I/O failure or failed verification (exit 1).
    Runtime(String),
    /// Bad arguments or configuration (exit 2).
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } | Error::UnknownPreset(_) | Error::Config(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn load(source: &Source, overrides: &Overrides) -> Result<Scenario, Error> {
    let mut sc = match (&source.preset, &source.config) {
        (Some(name), _) => preset(name)?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            parse_config(&text).map_err(|e| match e {
                Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
                other => other,
            })?
        }
        (None, None) => unreachable!("clap enforces one source"),
    };
    if let Some(n) = overrides.nel {
        sc.domain.elements = n;
    }
    if let Some(h) = overrides.horizon {
        sc.time.horizon = h;
    }
    if let Some(dt) = overrides.dt {
        sc.time.dt = dt;
    }
    if let Some(e) = overrides.timeseries_every {
        sc.output.timeseries_every = e;
    }
    if let Some(e) = overrides.snapshot_every {
        sc.output.snapshot_every = e;
    }
    sc.validate()?;
    Ok(sc)
}

fn is_multiple(t: f64, every: f64) -> bool {
    every > 0.0 && ((t / every) - (t / every).round()).abs() < 1e-6
}

fn run(sc: &Scenario, out: &Path, quiet: bool) -> Result<(), Failure> {
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    fs::write(out.join("scenario.toml"), to_config_string(sc)?).map_err(|e| Error::io(out, e))?;
    let mut sim = sc.simulator()?;
    let initial = sc.initial_state(&sim)?;
    let mut rows: Vec<Diagnostics> = Vec::new();
    let snapshot_every = sc.output.snapshot_every;
    let result = sim.run(initial, sc.time.horizon, sc.output.timeseries_every, &mut |obs| {
        let d = Diagnostics::from_observation(&obs);
        if !quiet {
            eprintln!(
                "t = {:8.2}  V_c = {:.5e} mm2  P_s = {:.5e}  newton {}  gmres {}",
                d.time,
                d.volume.tumor_mm2(),
                d.psa.mean,
                d.newton_iterations,
                d.gmres_iterations
            );
        }
        rows.push(d);
        if is_multiple(obs.state.time, snapshot_every) {
            write_snapshot(obs.sim.space(), obs.state, out)?;
        }
        Ok(())
    });
    write_timeseries(&out.join("timeseries.csv"), &rows)?;
    result?;
    Ok(())
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run {
            source,
            overrides,
            out,
            quiet,
        } => {
            let sc = load(&source, &overrides)?;
            run(&sc, &out, quiet)
        }
        Command::ListPresets => {
            for name in preset_names() {
                println!("{name}");
            }
            Ok(())
        }
        Command::Validate { source, overrides } => {
            let sc = load(&source, &overrides)?;
            let v = sc.check();
            let line = |name: &str, c: &pcasim_core::model::Check| {
                println!(
                    "{name}: {} (sup {:.6e}, limit {:.6e}{})",
                    if c.passed { "pass" } else { "FAIL" },
                    c.supremum,
                    c.limit,
                    c.violation_time.map(|t| format!(", first violated at day {t}")).unwrap_or_default()
                )
            };
            line("double well |m(sigma) - m_ref u| < 1/3", &v.double_well);
            line("supply s <= S_c", &v.supply);
            Ok(())
        }
        Command::ShowConfig { source, overrides } => {
            let sc = load(&source, &overrides)?;
            print!("{}", to_config_string(&sc)?);
            Ok(())
        }
        Command::Verify { quick, out } => {
            let rows = run_suite(SuiteOptions { quick })?;
            let csv = report_csv(&rows);
            print!("{csv}");
            if let Some(path) = out {
                fs::write(&path, &csv).map_err(|e| Error::io(&path, e))?;
            }
            if rows.iter().all(|r| r.passed()) {
                Ok(())
            } else {
                Err(Failure::Runtime("verification failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
