//! `oamsim`: writes each figure or number as a file, prints one headline
//! value on stdout.
//!
//! Exit codes: 0 success, 1 oracle verification failed, 2 bad input,
//! 3 I/O failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "oamsim", version, about = "Phase-plate OAM simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rotation-overlap or coincidence fringe as CSV.
    Fringe(FringeArgs),
    /// CHSH parameter as JSON.
    Bell(BellArgs),
    /// Binary-mask search for maximal S.
    Search(SearchArgs),
    /// LG decomposition of a plate-shaped Gaussian as CSV.
    Decompose(DecomposeArgs),
    /// Far-field intensity as 16-bit PGM plus JSON sidecar.
    Farfield(FarfieldArgs),
    /// Oracle sweeps as JSON lines.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
pub enum PlateKind {
    Spiral,
    Step,
}

#[derive(Args, Clone)]
pub struct PlateArgs {
    /// Plate family for inline specs.
    #[arg(long, value_enum, default_value = "spiral")]
    pub plate: PlateKind,
    /// Spiral step ℓ.
    #[arg(long, default_value = "0.5", value_parser = angle)]
    pub ell: f64,
    /// Step delay φ (accepts `pi` literals).
    #[arg(long, default_value = "pi", value_parser = angle)]
    pub phi: f64,
    /// Edge orientation.
    #[arg(long, default_value = "0", value_parser = angle)]
    pub alpha: f64,
    /// Plate JSON; overrides the inline flags.
    #[arg(long)]
    pub plate_file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum FringeMode {
    Overlap,
    Coincidence,
}

#[derive(Args)]
pub struct FringeArgs {
    #[command(flatten)]
    pub plate: PlateArgs,
    #[arg(long, value_enum, default_value = "overlap")]
    pub mode: FringeMode,
    #[arg(long, default_value_t = 360)]
    pub samples: usize,
    /// Pump OAM for coincidence fringes.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub q: i64,
    /// Common analyzer offset for coincidence fringes.
    #[arg(long, default_value = "0", value_parser = angle)]
    pub offset: f64,
    /// Recheck every sample against the quadrature oracle.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, default_value = "fringe.csv")]
    pub out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum SettingsKind {
    /// `polarization` for φ = π half planes, `paper` otherwise.
    Default,
    Paper,
    Polarization,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum FringeKind {
    /// The plate's own rotation fringe.
    Plate,
    Cos2,
}

#[derive(Args)]
pub struct BellArgs {
    #[command(flatten)]
    pub plate: PlateArgs,
    #[arg(long, value_enum, default_value = "plate")]
    pub fringe: FringeKind,
    #[arg(long, value_enum, default_value = "default")]
    pub settings: SettingsKind,
    /// Override the perpendicular offset.
    #[arg(long, value_parser = angle)]
    pub perp: Option<f64>,
    #[arg(long, default_value = "bell.json")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 6)]
    pub sectors: usize,
    #[arg(long, default_value = "pi", value_parser = angle)]
    pub phi: f64,
    #[arg(long, default_value_t = 20_000)]
    pub budget: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 64)]
    pub starts: usize,
    /// Starting mask (plate JSON with sectors, or a step plate).
    #[arg(long)]
    pub init: Option<PathBuf>,
    /// `default` follows the `--init` plate, `paper` without one.
    #[arg(long, value_enum, default_value = "default")]
    pub settings: SettingsKind,
    #[arg(long, default_value = "search.json")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct DecomposeArgs {
    #[arg(long, default_value = "0.5", value_parser = angle)]
    pub ell: f64,
    #[arg(long, default_value_t = 0.87)]
    pub target: f64,
    /// Fixed `|l − ℓ|` half-width; disables automatic expansion.
    #[arg(long)]
    pub l_half_width: Option<i64>,
    #[arg(long)]
    pub p_max: Option<u32>,
    #[arg(long, default_value = "decompose.csv")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct FarfieldArgs {
    #[arg(long, default_value = "3.5", value_parser = angle)]
    pub ell: f64,
    #[arg(long, default_value_t = 1024)]
    pub grid: usize,
    /// Waist-plane window in waists.
    #[arg(long, default_value_t = 16.0)]
    pub extent: f64,
    #[arg(long, default_value = "farfield.pgm")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
    #[arg(long, default_value = "verify.jsonl")]
    pub out: PathBuf,
}

fn angle(text: &str) -> Result<f64, String> {
    oamsim_core::angle::parse_angle(text).ok_or_else(|| format!("cannot read angle `{text}`"))
}

fn configure_threads() -> Result<(), commands::CliError> {
    if let Ok(v) = std::env::var("OAM_SIM_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| commands::CliError::Input(format!("OAM_SIM_THREADS={v} is not a count")))?;
        // a pool may already exist inside tests; that is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Fringe(a) => commands::fringe(&a),
        Command::Bell(a) => commands::bell(&a),
        Command::Search(a) => commands::search(&a),
        Command::Decompose(a) => commands::decompose(&a),
        Command::Farfield(a) => commands::farfield(&a),
        Command::Verify(a) => commands::verify(&a),
    });
    match result {
        Ok(headline) => {
            println!("{headline}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("oamsim: {e}");
            ExitCode::from(e.code())
        }
    }
}
