use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "confluent", version, about = "Confluent second-order SUSY partners of 1D Schrödinger potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the partner potential and write it with the key function and seed.
    Transform(TransformArgs),
    /// Build the partner and check its spectrum with the finite-difference eigensolver.
    Verify(VerifyArgs),
    /// Classify the transformation over a list of ν values.
    ScanNu(ScanArgs),
    /// Emit the data of a named reference figure (fig1, fig2).
    Figure(FigureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialKind {
    Free,
    #[value(alias = "pt")]
    PoschlTeller,
    Oscillator,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VanishSide {
    Left,
    Right,
}

/// `xmin:xmax:n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub xmin: f64,
    pub xmax: f64,
    pub n: usize,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected xmin:xmax:n, got '{s}'"));
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("bad number '{p}': {e}"));
        let n = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|e| format!("bad point count '{}': {e}", parts[2]))?;
        Ok(Self {
            xmin: num(parts[0])?,
            xmax: num(parts[1])?,
            n,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct PotentialArgs {
    #[arg(long, value_enum)]
    pub potential: PotentialKind,
    /// Well parameter of the Pöschl-Teller potential.
    #[arg(long, default_value_t = 1.0)]
    pub k0: f64,
    /// Two-column `x V` table for `--potential custom`.
    #[arg(long, required_if_eq("potential", "custom"))]
    pub potential_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SeedArgs {
    /// Use the normalized eigenstate with this index as seed.
    #[arg(long, conflicts_with_all = ["epsilon", "vanish"])]
    pub bound_state: Option<usize>,
    /// Factorization energy of a non-normalizable seed.
    #[arg(long, allow_hyphen_values = true, requires = "vanish")]
    pub epsilon: Option<f64>,
    /// Side on which the seed vanishes.
    #[arg(long, value_enum, requires = "epsilon")]
    pub vanish: Option<VanishSide>,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct OffsetArgs {
    /// Value of the key function at x0.
    #[arg(long, allow_hyphen_values = true)]
    pub w0: Option<f64>,
    /// Asymptotic offset ν of the key function.
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Working grid as xmin:xmax:n (n odd). Defaults depend on the potential.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<GridSpec>,
    /// Reference point; must be a grid point.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub x0: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ToleranceArgs {
    #[arg(long, env = "SINGULAR_TOL", default_value_t = confluent_core::confluent::DEFAULT_SINGULAR_TOL)]
    pub singular_tol: f64,
    #[arg(long, env = "SPECTRUM_TOL", default_value_t = crate::DEFAULT_SPECTRUM_TOL)]
    pub spectrum_tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct TransformArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub offset: OffsetArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub transform: TransformArgs,
    /// Number of discrete levels to compare.
    #[arg(long, default_value_t = 6)]
    pub levels: usize,
    /// Keep the grid fixed instead of widening it until the levels settle.
    #[arg(long)]
    pub no_widen: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    /// Comma-separated ν values; may be empty.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub nu_list: String,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    pub name: String,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

pub fn parse_nu_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<f64>().map_err(|e| format!("bad ν '{p}': {e}")))
        .collect()
}
