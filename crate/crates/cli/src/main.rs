//! `mixwave`: forward runs, spectra, observability sweeps and source
//! reconstructions for the mixed finite element wave model.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use mixwave::experiments::{self, config::KEYS, RunConfig, RunSummary};
use mixwave::Error;

#[derive(Debug, Parser)]
#[command(
    name = "mixwave",
    version,
    about = "Mixed finite element wave solver and boundary-data source reconstruction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Newmark run; writes energy.csv and trace.csv
    Forward,
    /// Generalized eigenpairs (N <= 2000); writes spectrum.csv
    Spectrum,
    /// Worst-case observability quotient over n_list; writes observability.csv
    Observability,
    /// One reconstruction from fine-mesh data; writes invert.csv and reconstruction.csv
    Invert,
    /// Clean data, smooth-sine potential, sources f and g
    Table1,
    /// Noisy data, source f
    Table2,
    /// Clean data, discontinuous-step potential
    Table3,
    /// Source g for several observation times, with x,value profiles
    TimeSweep,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Forward => "forward",
            Command::Spectrum => "spectrum",
            Command::Observability => "observability",
            Command::Invert => "invert",
            Command::Table1 => "table1",
            Command::Table2 => "table2",
            Command::Table3 => "table3",
            Command::TimeSweep => "time-sweep",
        }
    }
}

// Command-line values win over the configuration file.
#[derive(Debug, Args)]
struct Overrides {
    /// TOML configuration file (keys listed below)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Base seed of all random streams
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Interior nodes, h = 1/(N+1)
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Observation time T
    #[arg(long, global = true)]
    t_final: Option<f64>,
    /// Time step (default h)
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// Relative noise level of invert
    #[arg(long, global = true)]
    delta: Option<f64>,
    /// Synthesis mesh refinement factor (>= 4)
    #[arg(long, global = true)]
    fine_factor: Option<usize>,
}

impl Overrides {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(v) = &self.out {
            cfg.out = v.clone();
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.n {
            cfg.n = v;
        }
        if let Some(v) = self.t_final {
            cfg.t_final = v;
        }
        if let Some(v) = self.dt {
            cfg.dt = Some(v);
        }
        if let Some(v) = self.delta {
            cfg.delta = v;
        }
        if let Some(v) = self.fine_factor {
            cfg.fine_factor = v;
        }
    }
}

const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;
const EXIT_NOT_CONVERGED: u8 = 5;

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidArgument(_) | Error::UnknownName { .. } | Error::Config(_) => EXIT_USAGE,
        Error::Io { .. } | Error::Csv { .. } => EXIT_IO,
        Error::NumericalFailure(_) => EXIT_NUMERICAL,
    }
}

fn config_help() -> String {
    let width = KEYS.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut s = String::from("Configuration keys (flat TOML, all optional):\n");
    for (key, meaning) in KEYS {
        s.push_str(&format!("  {key:<width$}  {meaning}\n"));
    }
    s.push_str("\nExit codes: 0 ok, 2 invalid input, 3 I/O, 4 numerical failure, 5 not converged");
    s
}

fn run(cli: &Cli) -> Result<RunSummary, Error> {
    let mut cfg = match &cli.overrides.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cli.overrides.apply(&mut cfg);
    let name = cli.command.name();
    if let Some(declared) = &cfg.command {
        if declared != name {
            return Err(Error::Config(format!(
                "configuration is for `{declared}` but `{name}` was invoked"
            )));
        }
    }
    match cli.command {
        Command::Forward => experiments::run_forward(&cfg),
        Command::Spectrum => experiments::run_spectrum(&cfg),
        Command::Observability => experiments::run_observability(&cfg),
        Command::Invert => experiments::run_invert(&cfg),
        Command::Table1 | Command::Table2 | Command::Table3 | Command::TimeSweep => {
            experiments::run_preset(name, &cfg)
        }
    }
}

fn main() -> ExitCode {
    let matches = Cli::command().after_help(config_help()).get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(&cli) {
        Ok(summary) => {
            for line in &summary.lines {
                println!("{line}");
            }
            for file in &summary.files {
                println!("wrote {}", file.display());
            }
            for w in &summary.warnings {
                eprintln!("warning: {w}");
            }
            if summary.converged {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: minimization did not reach the gradient tolerance");
                ExitCode::from(EXIT_NOT_CONVERGED)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
