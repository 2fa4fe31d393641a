//! Command-line and config-file arguments.
//!
//! Every subcommand's arguments double as its config-file schema: a JSON
//! object whose keys are the flag names with `-` replaced by `_`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "cascade",
    version,
    about = "Quantum dynamics of parametric down-conversion with cascaded up-conversion",
    long_about = "Quantum dynamics of parametric down-conversion with cascaded up-conversion.\n\n\
                  Couplings and phase mismatches are in cm^-1, lengths and positions in cm, \
                  phases in radians. Exit codes: 0 success, 1 runtime failure, 2 invalid input, \
                  3 nearly multiple roots with fallback disabled, 4 strict cross-check failure."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bogoliubov matrix and observables at one position, as JSON.
    Solve(SolveArgs),
    /// Characteristic roots and amplification regime, as JSON.
    Classify(ClassifyArgs),
    /// Observables over a one- or two-dimensional parameter grid.
    Scan(ScanArgs),
    /// Degenerate phase-matched sweep over the gain comparing the exact, averaged, PDC-only and approximate models.
    SweepGain(SweepGainArgs),
    /// Exact, averaged and PDC-only models side by side at z = L.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Interaction parameters. Unset couplings and mismatches are zero.
#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct ParamArgs {
    /// PDC coupling modulus |kappa| [cm^-1]
    #[arg(long, value_name = "CM^-1")]
    pub kappa: Option<f64>,
    /// PDC coupling phase [rad]
    #[arg(long, value_name = "RAD", allow_hyphen_values = true)]
    pub kappa_phase: Option<f64>,
    /// Signal up-conversion coupling modulus |eta_s| [cm^-1]
    #[arg(long, value_name = "CM^-1")]
    pub eta_s: Option<f64>,
    /// Signal up-conversion coupling phase [rad]
    #[arg(long, value_name = "RAD", allow_hyphen_values = true)]
    pub eta_s_phase: Option<f64>,
    /// Idler up-conversion coupling modulus |eta_i| [cm^-1]
    #[arg(long, value_name = "CM^-1")]
    pub eta_i: Option<f64>,
    /// Idler up-conversion coupling phase [rad]
    #[arg(long, value_name = "RAD", allow_hyphen_values = true)]
    pub eta_i_phase: Option<f64>,
    /// PDC phase mismatch delta~ [cm^-1]
    #[arg(long, value_name = "CM^-1", allow_hyphen_values = true)]
    pub delta_tilde: Option<f64>,
    /// Signal up-conversion phase mismatch delta_s [cm^-1]
    #[arg(long, value_name = "CM^-1", allow_hyphen_values = true)]
    pub delta_s: Option<f64>,
    /// Idler up-conversion phase mismatch delta_i [cm^-1]
    #[arg(long, value_name = "CM^-1", allow_hyphen_values = true)]
    pub delta_i: Option<f64>,
    /// Crystal length L [cm], default 1
    #[arg(long, value_name = "CM", allow_hyphen_values = true)]
    pub length: Option<f64>,
    /// Frequency-degenerate case: eta_i = eta_s and delta_i = delta_s (idler flags not allowed)
    #[arg(long)]
    pub degenerate: bool,
    /// Three-mode case: eta_i = 0 and delta_i = 0 (idler flags not allowed)
    #[arg(long, conflicts_with = "degenerate")]
    pub three_mode: bool,
}

/// Help shared by every subcommand.
pub const CONFIG_HELP: &str = "JSON config file with the same keys as the flags (dashes become underscores); flags win on conflict";

#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Position in the crystal z [cm], default L
    #[arg(long, value_name = "CM")]
    pub z: Option<f64>,
    /// analytic, oracle or averaged
    #[arg(long, value_name = "SOLVER")]
    pub solver: Option<String>,
    /// Fail with exit code 3 near multiple roots instead of integrating numerically
    #[arg(long)]
    pub no_fallback: bool,
    /// Output file, default stdout
    #[arg(long, short, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[arg(long, value_name = "FILE", help = CONFIG_HELP)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Output file, default stdout
    #[arg(long, short, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[arg(long, value_name = "FILE", help = CONFIG_HELP)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct ScanArgs {
    /// Base parameters; --degenerate and --three-mode constrain every grid point.
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// First (inner) axis as NAME:MIN:MAX:COUNT or NAME:VALUE, in the units of the parameter.
    /// NAME is one of kappa, eta_s, eta_i, delta_tilde, delta_s, delta_i, length;
    /// couplings are swept in modulus at the base phase
    #[arg(long, value_name = "AXIS", allow_hyphen_values = true)]
    pub axis1: Option<String>,
    /// Optional second (outer) axis, same form as --axis1
    #[arg(long, value_name = "AXIS", allow_hyphen_values = true)]
    pub axis2: Option<String>,
    /// Comma-separated columns from regime, n_as, n_ai, n_bs, n_bi, minvar_a, minvar_b, minvar_c,
    /// growth_rate [cm^-1]; default all
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    pub quantities: Option<Vec<String>>,
    /// analytic, oracle or averaged
    #[arg(long, value_name = "SOLVER")]
    pub solver: Option<String>,
    /// Record nearly multiple roots as failed points instead of integrating numerically
    #[arg(long)]
    pub no_fallback: bool,
    /// Fraction of grid points re-solved by the oracle for comparison (0 to 1)
    #[arg(long, value_name = "FRACTION")]
    pub cross_check: Option<f64>,
    /// Seed of the cross-check sample
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,
    /// Exit with code 4 if the cross-check finds a disagreement (enables a 5% cross-check by default)
    #[arg(long)]
    pub strict: bool,
    /// Worker threads, default all cores
    #[arg(long, env = "CASCADE_THREADS", value_name = "N")]
    pub threads: Option<usize>,
    /// Output format, default csv
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file, default stdout
    #[arg(long, short, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[arg(long, value_name = "FILE", help = CONFIG_HELP)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepGainArgs {
    /// Up-conversion mismatch times length, delta_s L (dimensionless)
    #[arg(long, value_name = "X", allow_hyphen_values = true)]
    pub delta_s_l: Option<f64>,
    /// Coupling ratio r = |eta_s| / |kappa| (dimensionless), default 1
    #[arg(long, value_name = "R")]
    pub ratio: Option<f64>,
    /// Largest gain |kappa| L (dimensionless), default 6
    #[arg(long, value_name = "GAMMA")]
    pub gamma_max: Option<f64>,
    /// Number of gain values from 0 to --gamma-max, default 61
    #[arg(long, value_name = "N")]
    pub points: Option<usize>,
    /// Worker threads, default all cores
    #[arg(long, env = "CASCADE_THREADS", value_name = "N")]
    pub threads: Option<usize>,
    /// Output format, default csv
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file, default stdout
    #[arg(long, short, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[arg(long, value_name = "FILE", help = CONFIG_HELP)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct CompareArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Output format, default csv
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file, default stdout
    #[arg(long, short, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[arg(long, value_name = "FILE", help = CONFIG_HELP)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}
