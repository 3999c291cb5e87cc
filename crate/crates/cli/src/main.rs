use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use kmd_inertia::inertia::{self, SPEED_PREFIX};
use kmd_inertia::io::{self, RunConfig, MANIFEST_FILE};
use kmd_inertia::TimeSeriesSet;

/// Inertia estimation from swing data via Koopman mode decomposition.
#[derive(Parser, Debug)]
#[command(name = "kmd-inertia", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Simulate the fault sequence and write the sampled observables.
    Simulate,
    /// Estimate the inertia vector on one window.
    Estimate,
    /// Estimate over a range of window lengths.
    Sweep,
    /// Estimate with each rotor-speed channel left out in turn.
    LeaveOneOut,
    /// Write the Koopman spectrum of one window.
    Decompose,
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// Run configuration file (TOML, dotted keys); flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Builtin network name or network file.
    #[arg(long, global = true)]
    network: Option<String>,
    /// Uniform scale on loads and scheduled generation.
    #[arg(long, global = true)]
    loading: Option<f64>,
    /// Analyse this time-series CSV instead of simulating.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Fault preset.
    #[arg(long, global = true, value_parser = ["i", "ii"])]
    case: Option<String>,
    /// Faulted bus.
    #[arg(long, global = true)]
    bus: Option<usize>,
    /// Branch tripped at clearing, as FROM-TO.
    #[arg(long, global = true, value_name = "A-B")]
    trip: Option<String>,
    /// Fault duration in cycles.
    #[arg(long, global = true)]
    cycles: Option<f64>,
    /// Integration step, s.
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// Simulation end, s from fault inception.
    #[arg(long = "t-end", global = true)]
    t_end: Option<f64>,
    /// Sampling rate, Hz.
    #[arg(long = "sample-hz", global = true)]
    sample_hz: Option<f64>,
    /// Prony order (default: the largest the window admits).
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Keep modes above this fraction of the total energy.
    #[arg(long = "energy-eps", global = true)]
    energy_eps: Option<f64>,
    /// Analysis window, s.
    #[arg(long, global = true)]
    window: Option<f64>,
    /// Window sweep as lo:hi:step, s.
    #[arg(long, global = true, value_name = "LO:HI:STEP")]
    sweep: Option<String>,
    /// With `estimate`, also run the leave-one-out study.
    #[arg(long = "leave-one-out", global = true)]
    leave_one_out: bool,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads for sweeps and leave-one-out.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

fn parse_trip(text: &str) -> Result<[usize; 2]> {
    let (a, b) = text
        .split_once('-')
        .with_context(|| format!("--trip `{text}`: expected FROM-TO"))?;
    let bus = |s: &str| {
        s.trim()
            .parse::<usize>()
            .with_context(|| format!("--trip `{text}`: `{s}` is not a bus number"))
    };
    Ok([bus(a)?, bus(b)?])
}

impl RunArgs {
    fn config(&self, command: Command) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(case) = &self.case {
            cfg.apply_case(case)?;
        }
        if let Some(v) = &self.network {
            cfg.network = v.clone();
        }
        if let Some(v) = self.loading {
            cfg.loading = v;
        }
        if let Some(v) = &self.input {
            cfg.input = Some(v.clone());
        }
        if let Some(v) = self.bus {
            cfg.scenario.bus = v;
        }
        if let Some(v) = &self.trip {
            cfg.scenario.trip = parse_trip(v)?;
        }
        if let Some(v) = self.cycles {
            cfg.scenario.cycles = v;
        }
        if let Some(v) = self.dt {
            cfg.integration.dt = v;
        }
        if let Some(v) = self.t_end {
            cfg.integration.t_end = v;
        }
        if let Some(v) = self.sample_hz {
            cfg.sampling.hz = v;
        }
        if let Some(v) = self.order {
            cfg.kmd.order = Some(v);
        }
        if let Some(v) = self.energy_eps {
            cfg.kmd.energy_eps = Some(v);
        }
        if let Some(v) = self.window {
            cfg.study.window = v;
        }
        if let Some(v) = &self.sweep {
            cfg.study.windows = io::parse_sweep(v)?;
            if command == Command::Estimate {
                cfg.study.sweep = true;
            }
        }
        if self.leave_one_out {
            if command != Command::Estimate {
                bail!("--leave-one-out applies to `estimate` only");
            }
            cfg.study.leave_one_out = true;
        }
        if self.jobs == Some(0) {
            bail!("--jobs must be at least 1");
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn speed_labels(data: &TimeSeriesSet) -> Vec<String> {
    data.labels()
        .iter()
        .filter(|l| l.starts_with(SPEED_PREFIX))
        .cloned()
        .collect()
}

fn emit(dir: &Path, name: &str, text: &str) -> Result<()> {
    io::write_text(&dir.join(name), text)?;
    print!("{text}");
    Ok(())
}

fn sweep(cfg: &RunConfig, data: &TimeSeriesSet, dir: &Path) -> Result<()> {
    let rows = inertia::window_sweep(data, &cfg.study.windows, &cfg.estimator())?;
    emit(dir, "sweep.csv", &io::sweep_table(&rows, &speed_labels(data)))
}

fn leave_one_out(cfg: &RunConfig, data: &TimeSeriesSet, dir: &Path) -> Result<()> {
    let rows = inertia::leave_each_out(data, cfg.study.window, &cfg.estimator())?;
    emit(
        dir,
        "leave_one_out.csv",
        &io::leave_one_out_table(&rows, &speed_labels(data)),
    )
}

fn run(command: Command, cfg: &RunConfig, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("{}", dir.display()))?;
    let data = cfg.observations()?;
    match command {
        Command::Simulate => {
            io::write_timeseries_csv(&data, &dir.join("timeseries.csv"))?;
            println!(
                "{} samples x {} channels -> {}",
                data.len(),
                data.channels(),
                dir.join("timeseries.csv").display()
            );
        }
        Command::Estimate => {
            let window = cfg.study.window;
            let estimate = inertia::estimate_window(&data, window, &cfg.estimator())?;
            let row = inertia::WindowEstimate { window, estimate };
            emit(dir, "estimate.csv", &io::sweep_table(&[row], &speed_labels(&data)))?;
            if cfg.study.sweep {
                sweep(cfg, &data, dir)?;
            }
            if cfg.study.leave_one_out {
                leave_one_out(cfg, &data, dir)?;
            }
        }
        Command::Sweep => sweep(cfg, &data, dir)?,
        Command::LeaveOneOut => leave_one_out(cfg, &data, dir)?,
        Command::Decompose => {
            let window = data.window(cfg.study.window)?;
            let spec = cfg.estimator().decompose(&window)?;
            io::write_spectrum_csv(&spec, &dir.join("spectrum.csv"))?;
            println!(
                "{} modes over {} samples -> {}",
                spec.order(),
                spec.samples,
                dir.join("spectrum.csv").display()
            );
        }
    }
    io::write_text(&dir.join(MANIFEST_FILE), &cfg.to_manifest())?;
    Ok(())
}

fn main_inner(cli: Cli) -> Result<()> {
    let cfg = cli.run.config(cli.command)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.run.jobs {
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build()?;
    pool.install(|| run(cli.command, &cfg, &cli.run.out))
}

/// Error chain on one line.
fn one_line(err: &anyhow::Error) -> String {
    let mut parts: Vec<String> = Vec::new();
    for cause in err.chain() {
        let text = cause.to_string();
        if !parts.last().is_some_and(|p| p.ends_with(&text)) {
            parts.push(text);
        }
    }
    parts.join(": ").replace(['\n', '\r'], " ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let first = first.strip_prefix("error: ").unwrap_or(first);
            eprintln!("error: {first}");
            return ExitCode::from(2);
        }
    };
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", one_line(&e));
            ExitCode::FAILURE
        }
    }
}
