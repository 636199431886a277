//! Command-line harness around the `cheshire` crate: exact-model sweeps,
//! event-based engine sweeps, fringe-data ingestion, comparisons and fits.

mod analyze;
mod files;
mod sweep;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cheshire::model::{Beam, Postselect};

/// Command failure with its process exit code.
///
/// 0 success, 1 I/O trouble, 2 validation (bad flags, bad files, bad
/// physics parameters), 3 comparison beyond the sigma threshold.
#[derive(Debug)]
pub enum CliError {
    Io(String),
    Validation(String),
    Comparison(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Comparison(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(msg) | CliError::Validation(msg) | CliError::Comparison(msg) => {
                f.write_str(msg)
            }
        }
    }
}

/// Shorthand for mapping foreign error types onto [`CliError::Validation`].
pub fn validation(err: impl fmt::Display) -> CliError {
    CliError::Validation(err.to_string())
}

#[derive(Parser)]
#[command(
    name = "cheshire-cli",
    version,
    about = "Single-neutron interferometer toolkit: exact sweeps, event-based runs, calibration"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the exact model over chi; one CSV per scenario and beam
    OracleSweep(OracleSweepArgs),
    /// Sweep the event-based engine over chi, with per-path counts and loss tallies
    DesSweep(DesSweepArgs),
    /// Validate a measured fringe file and emit its canonical form
    Ingest(IngestArgs),
    /// z-score table of engine counts against exact-model expectations
    Compare(CompareArgs),
    /// Weak values of the path projectors and spin-path products
    Weak(WeakArgs),
    /// Fit a fringe model to an ingested scan
    Fit(FitArgs),
    /// Reflectivity candidates from an H/O count ratio
    EstimateR(EstimateRArgs),
}

#[derive(Args)]
struct GridArgs {
    /// First chi value, degrees
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    chi_start: f64,
    /// Last chi value, degrees (inclusive)
    #[arg(long, default_value_t = 315.0, allow_negative_numbers = true)]
    chi_stop: f64,
    /// Grid spacing, degrees
    #[arg(long, default_value_t = 45.0)]
    chi_step: f64,
}

#[derive(Args)]
struct OutArgs {
    /// Output directory; defaults to $CHESHIRE_OUT_DIR, then the working directory
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Omit the generated_unix header line so reruns are byte-identical
    #[arg(long)]
    no_timestamp: bool,
}

impl OutArgs {
    fn resolve_dir(&self) -> PathBuf {
        self.out_dir.clone().unwrap_or_else(|| {
            std::env::var_os("CHESHIRE_OUT_DIR")
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from("."))
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NormalizeArg {
    /// Copy the raw value
    Raw,
    /// Divide by the no-absorber, no-field value at the same chi
    ByRef,
    /// Divide by the exact no-absorber, no-field value at chi = 0
    ByIdeal,
}

impl NormalizeArg {
    fn to_mode(self) -> sweep::Normalization {
        match self {
            NormalizeArg::Raw => sweep::Normalization::Raw,
            NormalizeArg::ByRef => sweep::Normalization::ByRef,
            NormalizeArg::ByIdeal => sweep::Normalization::ByIdeal,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PostselectArg {
    None,
    OOnly,
    HOnly,
    Both,
}

impl PostselectArg {
    fn to_model(self) -> Postselect {
        match self {
            PostselectArg::None => Postselect::None,
            PostselectArg::OOnly => Postselect::OOnly,
            PostselectArg::HOnly => Postselect::HOnly,
            PostselectArg::Both => Postselect::Both,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
pub enum BeamArg {
    H,
    O,
}

impl BeamArg {
    pub fn to_model(self) -> Beam {
        match self {
            BeamArg::H => Beam::H,
            BeamArg::O => Beam::O,
        }
    }
}

#[derive(Args)]
struct OracleSweepArgs {
    /// Comma-separated scenarios (empty, ref, abs1, abs2, mag1, mag2) or "all"
    #[arg(long, default_value = "all", value_delimiter = ',')]
    scenarios: Vec<String>,
    #[command(flatten)]
    grid: GridArgs,
    /// Override the analyzer placement of every swept scenario
    #[arg(long, value_enum)]
    postselect: Option<PostselectArg>,
    /// Content of the extra "normalized" column
    #[arg(long, value_enum, default_value_t = NormalizeArg::Raw)]
    normalize: NormalizeArg,
    /// Beam-splitter reflectivity
    #[arg(long, default_value_t = 0.22)]
    r: f64,
    /// Output file prefix
    #[arg(long, default_value = "oracle")]
    prefix: String,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct DesSweepArgs {
    /// Comma-separated scenarios (empty, ref, abs1, abs2, mag1, mag2) or "all"
    #[arg(long, default_value = "all", value_delimiter = ',')]
    scenarios: Vec<String>,
    #[command(flatten)]
    grid: GridArgs,
    /// Override the analyzer placement of every swept scenario
    #[arg(long, value_enum)]
    postselect: Option<PostselectArg>,
    /// Content of the extra "normalized" column
    #[arg(long, value_enum, default_value_t = NormalizeArg::Raw)]
    normalize: NormalizeArg,
    /// Beam-splitter reflectivity
    #[arg(long, default_value_t = 0.22)]
    r: f64,
    /// Splitter memory coupling, in [0, 1)
    #[arg(long, default_value_t = 0.65)]
    gamma: f64,
    /// Messengers tallied per chi point
    #[arg(long, default_value_t = 72_000)]
    n: u64,
    /// Base RNG seed; point k of a sweep uses seed + k
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Skip the warm-up emissions before tallying
    #[arg(long)]
    no_warmup: bool,
    /// Fraction lost in the O-beam spin analysis
    #[arg(long, default_value_t = 0.7)]
    zeta: f64,
    /// Scattering discard probability for path-1 absorber traversers
    #[arg(long, default_value_t = 0.0)]
    pscatt1: f64,
    /// Scattering discard probability for path-2 absorber traversers
    #[arg(long, default_value_t = 0.0)]
    pscatt2: f64,
    /// Output file prefix
    #[arg(long, default_value = "des")]
    prefix: String,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct IngestArgs {
    /// Fringe scan to validate: '#' comments, header row, columns chi_deg,
    /// counts and optionally sigma
    #[arg(long)]
    input: PathBuf,
    /// Scenario label recorded in the output header
    #[arg(long, default_value = "empty")]
    scenario: String,
    /// Beam label recorded in the output header
    #[arg(long, value_enum, default_value_t = BeamArg::O)]
    beam: BeamArg,
    /// Canonical output file; defaults to ingested_<scenario>_<beam>.csv in the output directory
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct CompareArgs {
    /// Engine sweep files (des-sweep output)
    #[arg(long, required = true, num_args = 1..)]
    des: Vec<PathBuf>,
    /// Exact-model sweep files (oracle-sweep output)
    #[arg(long, required = true, num_args = 1..)]
    oracle: Vec<PathBuf>,
    /// Measured scans (ingest output) overlaid on the mean-count report
    #[arg(long, num_args = 1..)]
    experimental: Vec<PathBuf>,
    /// |z| above this value counts as a failed cell
    #[arg(long, default_value_t = 3.0)]
    sigma_threshold: f64,
}

#[derive(Args)]
struct WeakArgs {
    /// Relative phase chi, degrees
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    chi: f64,
    /// Spin-rotation angle in path 1, degrees
    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
    theta1: f64,
    /// Spin-rotation angle in path 2, degrees
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta2: f64,
    /// Absorber transmissivity in path 1
    #[arg(long, default_value_t = 1.0)]
    t1: f64,
    /// Absorber transmissivity in path 2
    #[arg(long, default_value_t = 0.79)]
    t2: f64,
    /// Beam-splitter reflectivity
    #[arg(long, default_value_t = 0.22)]
    r: f64,
    /// Postselected beam the weak values refer to
    #[arg(long, value_enum, default_value_t = BeamArg::O)]
    beam: BeamArg,
    /// Spacing of the sz_pi1_sq sweep over chi in [0, 360), degrees
    #[arg(long, default_value_t = 45.0)]
    sweep_step: f64,
    /// Emit JSON instead of the text report
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FitModelArg {
    /// b (1 + v sin chi)
    Sin,
    /// b (1 + v cos(chi + phi2))
    Cos,
}

#[derive(Args)]
struct FitArgs {
    /// Fringe scan in the ingest format
    #[arg(long)]
    input: PathBuf,
    /// Scenario label for the series
    #[arg(long, default_value = "empty")]
    scenario: String,
    /// Beam label for the series
    #[arg(long, value_enum, default_value_t = BeamArg::O)]
    beam: BeamArg,
    /// Fringe model
    #[arg(long, value_enum, default_value_t = FitModelArg::Sin)]
    model: FitModelArg,
    /// Emit JSON instead of the text report
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum RatioModeArg {
    /// Bare interferometer, no analyzers: a = P_H / P_O
    Bare,
    /// Analyzer in the O beam: a = P_H / P_O after postselection
    Postselected,
}

#[derive(Args)]
struct EstimateRArgs {
    /// H/O count ratio; alternative to --h-counts/--o-counts
    #[arg(long, allow_negative_numbers = true)]
    ratio: Option<f64>,
    /// chi-averaged H-beam counts
    #[arg(long)]
    h_counts: Option<f64>,
    /// chi-averaged O-beam counts
    #[arg(long)]
    o_counts: Option<f64>,
    /// Which count-rate model links the ratio to R
    #[arg(long, value_enum, default_value_t = RatioModeArg::Bare)]
    mode: RatioModeArg,
    /// Measured O-beam visibility; adds the predicted H-beam visibility
    #[arg(long)]
    v_o: Option<f64>,
    /// Emit JSON instead of the text report
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (`cheshire-cli ... | head`) instead of
    // panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code())
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::OracleSweep(args) => sweep::oracle_sweep(&args.into_plan()?),
        Command::DesSweep(args) => sweep::des_sweep(&args.into_plan()?),
        Command::Ingest(args) => analyze::ingest(&args),
        Command::Compare(args) => analyze::compare(&args),
        Command::Weak(args) => analyze::weak(&args),
        Command::Fit(args) => analyze::fit(&args),
        Command::EstimateR(args) => analyze::estimate_r(&args),
    }
}

impl OracleSweepArgs {
    fn into_plan(self) -> Result<sweep::SweepPlan, CliError> {
        Ok(sweep::SweepPlan {
            scenarios: sweep::parse_scenarios(&self.scenarios)?,
            grid: sweep::chi_grid(self.grid.chi_start, self.grid.chi_stop, self.grid.chi_step)?,
            postselect: self.postselect.map(PostselectArg::to_model),
            normalize: self.normalize.to_mode(),
            r: self.r,
            engine: None,
            prefix: self.prefix,
            out_dir: self.out.resolve_dir(),
            timestamp: !self.out.no_timestamp,
        })
    }
}

impl DesSweepArgs {
    fn into_plan(self) -> Result<sweep::SweepPlan, CliError> {
        Ok(sweep::SweepPlan {
            scenarios: sweep::parse_scenarios(&self.scenarios)?,
            grid: sweep::chi_grid(self.grid.chi_start, self.grid.chi_stop, self.grid.chi_step)?,
            postselect: self.postselect.map(PostselectArg::to_model),
            normalize: self.normalize.to_mode(),
            r: self.r,
            engine: Some(sweep::EngineSettings {
                gamma: self.gamma,
                n: self.n,
                seed: self.seed,
                warmup: !self.no_warmup,
                zeta: self.zeta,
                pscatt1: self.pscatt1,
                pscatt2: self.pscatt2,
            }),
            prefix: self.prefix,
            out_dir: self.out.resolve_dir(),
            timestamp: !self.out.no_timestamp,
        })
    }
}
