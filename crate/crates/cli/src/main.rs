//! `birkhoff`: linking numbers, self-linking, transverse-surface topology and
//! asymptotic experiments for flows on the 3-sphere.
//!
//! Exit status: 0 on success, 1 on usage or malformed input, 2 on domain
//! errors (the error name is printed on stderr).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod config;
mod error;
mod output;

pub use error::CliError;
use config::{FileConfig, FlagValues, Format, RunConfig, ToleranceOverrides};

#[derive(Debug, Parser)]
#[command(name = "birkhoff", version, about = "Transverse surfaces of flows on the 3-sphere from boundary data")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// TOML file with defaults (seed, step, threads, format, [tolerances]).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Integrator step size.
    #[arg(long, global = true)]
    step: Option<f64>,
    /// Worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file, written atomically. Defaults to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long = "eps-int", global = true)]
    eps_int: Option<f64>,
    #[arg(long = "eps-frame", global = true)]
    eps_frame: Option<f64>,
    #[arg(long = "eps-sep", global = true)]
    eps_sep: Option<f64>,
    #[arg(long = "delta-pole", global = true)]
    delta_pole: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FramingChoice {
    /// The transverse field of `--field`.
    Zeta,
    /// The `normals` arrays of the curve file.
    Normals,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    /// `hopf` or `seifert:p,q`.
    #[arg(long, default_value = "hopf")]
    pub field: String,
    /// Divide the field by this factor.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
}

#[derive(Debug, Args)]
pub struct FramingArgs {
    #[arg(long, value_enum, default_value = "zeta")]
    pub framing: FramingChoice,
    /// Longitudinal winding of the framing.
    #[arg(long = "k-f", default_value_t = 1)]
    pub k_f: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Linking numbers of the curves in a file.
    Link {
        #[arg(long)]
        curves: PathBuf,
    },
    /// Self-linking of each curve against a framing.
    Slk {
        #[arg(long)]
        curves: PathBuf,
        #[command(flatten)]
        framing: FramingArgs,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Euler characteristic, slopes and genus of a surface bounded by the curves.
    Section {
        #[arg(long)]
        curves: PathBuf,
        /// Comma-separated multiplicities (default: all 1).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        mult: Vec<i64>,
        #[command(flatten)]
        framing: FramingArgs,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Monte-Carlo helicity estimate.
    Helicity {
        #[command(flatten)]
        field: FieldArgs,
        /// Orbit arc duration.
        #[arg(long = "T")]
        t: f64,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
    },
    /// Genus over squared period against half the helicity along a family.
    Asymptotic {
        #[arg(long, default_value = "seifert-fib")]
        family: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Pairs per helicity estimate.
        #[arg(long)]
        pairs: Option<usize>,
        /// Integrator step for the helicity estimates.
        #[arg(long = "helicity-step")]
        helicity_step: Option<f64>,
    },
    /// Hopf fibre table from first principles.
    VerifyHopf {
        #[arg(long = "max-m", default_value_t = 6)]
        max_m: usize,
        #[arg(long, default_value_t = 256)]
        vertices: usize,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let g = cli.global;
    let file = g.config.as_deref().map(FileConfig::read).transpose()?;
    let flags = FlagValues {
        seed: g.seed,
        step: g.step,
        threads: g.threads,
        format: g.format,
        out: g.out,
        tolerances: ToleranceOverrides {
            eps_int: g.eps_int,
            eps_frame: g.eps_frame,
            eps_sep: g.eps_sep,
            delta_pole: g.delta_pole,
            ..Default::default()
        },
    };
    let run = RunConfig::resolve(flags, file)?;
    if let Some(n) = run.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let (rendered, verdict) = commands::execute(&cli.command, &run)?;
    output::emit(&rendered, run.format, run.out.as_deref())?;
    verdict
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
