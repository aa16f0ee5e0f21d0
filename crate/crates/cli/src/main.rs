use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod format;

#[derive(Parser)]
#[command(
    name = "sparse-eigsolve",
    version,
    about = "Solve sparse polynomial systems by resultant matrices and eigenvectors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a system read as JSON from --input or stdin.
    Solve(SolveArgs),
    /// Solve a random dense system with integer coefficients in [-10, 10].
    Polysolve(PolysolveArgs),
    /// First singular value of a real 3-way tensor.
    TrilinearMax(TrilinearArgs),
    /// Normalized mixed volume of n supports in dimension n.
    MixedVolume(MixedVolumeArgs),
    /// Time steps 1 to 4 on random dense bivariate systems.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EmitArg {
    Solutions,
    Full,
}

#[derive(Args)]
pub struct Output {
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Args)]
pub struct Tuning {
    /// Acceptance tolerance ε of the (K+1)ε rule.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Maximum number of lattice points per basis.
    #[arg(long)]
    pub budget: Option<usize>,
}

#[derive(Args)]
pub struct SolveArgs {
    /// Request file; stdin when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Overrides the request's seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Inline JSON term list used as f0.
    #[arg(long)]
    pub f0: Option<String>,
    #[arg(long, value_enum)]
    pub emit: Option<EmitArg>,
    #[command(flatten)]
    pub tuning: Tuning,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args)]
pub struct PolysolveArgs {
    /// Degrees of f0, f1, ..., fk, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub degrees: Vec<i64>,
    /// Number of variables.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "solutions")]
    pub emit: EmitArg,
    #[command(flatten)]
    pub tuning: Tuning,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args)]
pub struct TrilinearArgs {
    /// Tensor JSON file; stdin when neither this nor --tensor is given.
    #[arg(long, conflicts_with = "tensor")]
    pub input: Option<PathBuf>,
    /// Inline tensor JSON.
    #[arg(long)]
    pub tensor: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub tuning: Tuning,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args)]
pub struct MixedVolumeArgs {
    /// Supports JSON file; stdin when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Degree tuples separated by ';', for example "1,5,7;1,5,9".
    #[arg(long, default_value = commands::DEFAULT_BENCH_ROWS)]
    pub rows: String,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub tuning: Tuning,
    #[command(flatten)]
    pub out: Output,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => commands::solve(&a),
        Command::Polysolve(a) => commands::polysolve(&a),
        Command::TrilinearMax(a) => commands::trilinear_max(&a),
        Command::MixedVolume(a) => commands::mixed_volume(&a),
        Command::Bench(a) => commands::bench(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Some(msg) = f.message() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(f.code())
        }
    }
}
