mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use config::{Format, Overrides, RunConfig};

#[derive(Parser, Debug)]
#[command(
    name = "gcos",
    version,
    about = "Cosine transform, Crofton inversion and Klain functions on Gr2(C^2) mod U(1)xU(1)"
)]
pub struct Cli {
    /// TOML file with quadrature_order, output_format, seed and a [tolerances] table.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Gauss order for moments, kernel tables and structure reports (>= 4).
    #[arg(long, global = true, value_name = "N")]
    order: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for randomized sweeps.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Named tolerance override, e.g. --tol hermitian=1e-9 (repeatable).
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE", value_parser = config::parse_tolerance)]
    tolerances: Vec<(String, f64)>,
    /// Read and write angles in degrees instead of radians.
    #[arg(long, global = true)]
    degrees: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Torus orbits of planes.
    #[command(subcommand)]
    Orbit(OrbitCmd),
    /// Self-dual split and Gluck-Warner sphere coordinates of a plane.
    Gw {
        #[arg(long, value_parser = parse_plane)]
        plane: [f64; 8],
    },
    /// |det| pairing of two planes, directly and through sphere coordinates.
    Pairing {
        #[arg(long, value_parser = parse_plane)]
        plane: [f64; 8],
        #[arg(long, value_parser = parse_plane)]
        other: [f64; 8],
    },
    /// Two-dimensional Legendre moments.
    #[command(subcommand)]
    Legendre(LegendreCmd),
    /// The torus-reduced cosine transform.
    #[command(subcommand)]
    Cosine(CosineCmd),
    /// Crofton densities of torus-invariant metrics.
    #[command(subcommand)]
    Crofton(CroftonCmd),
    /// Fredholm equations of the second kind.
    #[command(subcommand)]
    Fredholm(FredholmCmd),
    /// Klain function of complex l1 on a grid of sphere heights.
    Klain(KlainArgs),
    /// Hermitian test for complex norms.
    #[command(subcommand)]
    Hermitian(HermitianCmd),
    /// Run the acceptance criteria and print a table; exits 1 if any fails.
    Verify {
        /// Run only these criteria (repeatable, 1..=11).
        #[arg(long = "criterion", value_name = "ID")]
        criteria: Vec<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum OrbitCmd {
    /// Orbit label (theta, psi) and torus element carrying the representative to the plane.
    Reduce {
        #[arg(long, value_parser = parse_plane)]
        plane: [f64; 8],
    },
    /// The representative plane of the orbit (theta, psi).
    Representative {
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, allow_negative_numbers = true)]
        psi: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum LegendreCmd {
    /// Moments of a named function on [-1,1]^2 (CSV rows m, columns n).
    Moments {
        /// max | abs-sum | abs-diff | klain | one
        #[arg(long = "function", default_value = "max")]
        function: String,
        #[arg(long, default_value_t = 8)]
        degree: usize,
        /// Expansion coefficients instead of raw moments.
        #[arg(long)]
        normalized: bool,
        /// Use the plain tensor rule instead of splitting along the diagonals.
        #[arg(long)]
        no_split: bool,
    },
    /// Legendre coefficients of the delta on the torus family, optionally projected onto the image indices.
    Delta {
        #[arg(long, default_value_t = 5)]
        max_k: usize,
        #[arg(long, default_value_t = 5)]
        max_l: usize,
        #[arg(long)]
        image: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum CosineCmd {
    /// Apply the transform and sample the image at scattered points.
    Apply {
        /// one | max | klain | legendre:M,N | path to a coefficient CSV
        #[arg(long = "f")]
        f: String,
        #[arg(long, default_value_t = 16)]
        points: usize,
    },
    /// Annihilation test for Legendre products p_m(x) p_n(y).
    KernelCheck {
        /// Index pairs, e.g. "4,0;6,2".
        #[arg(long, default_value = "4,0;0,4;6,2;2,6;6,0;2,0")]
        indices: String,
        /// Threshold as a multiple of ||C 1||; defaults to the tolerance "annihilation" or 1e-3.
        #[arg(long)]
        factor: Option<f64>,
    },
    /// Self-adjointness defect on random polynomial pairs.
    Selfadjoint {
        #[arg(long, default_value_t = 6)]
        degree: usize,
        #[arg(long, default_value_t = 20)]
        pairs: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum CroftonCmd {
    /// Solve for the Crofton density; CSV of (eta, f) plus a JSON diagnostics record.
    Solve {
        /// euclid | l1 | linf | path to a CSV of (eta, F) samples
        #[arg(long, default_value = "euclid")]
        metric: String,
        #[arg(long, default_value_t = 64)]
        nodes: usize,
        /// Tikhonov parameter; ignored with --select-reg.
        #[arg(long, default_value_t = 1e-10)]
        reg: f64,
        #[arg(long, default_value = "sphere")]
        weight: String,
        /// Point masses on the two degenerate orbits.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        atoms: bool,
        /// Choose reg by the discrepancy principle.
        #[arg(long)]
        select_reg: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum FredholmCmd {
    /// lambda phi - int K phi = f by Nystrom.
    Solve2 {
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        /// xy | exp | coscos | crofton
        #[arg(long)]
        kernel: String,
        /// x | one | cos | sin | exp
        #[arg(long)]
        rhs: String,
        #[arg(long, default_value_t = 32)]
        nodes: usize,
        /// Interval; defaults depend on the kernel.
        #[arg(long, allow_negative_numbers = true)]
        a: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        b: Option<f64>,
    },
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
pub struct KlainArgs {
    /// Points per axis on [-1, 1].
    #[arg(long, default_value_t = 5)]
    pub grid: usize,
    /// quadrature | elliptic | series
    #[arg(long, default_value = "elliptic")]
    pub method: String,
    #[command(subcommand)]
    pub sub: Option<KlainSub>,
}

#[derive(Subcommand, Debug)]
pub enum KlainSub {
    /// Moment verdict table of the Klain function.
    Structure {
        #[arg(long, default_value_t = 12)]
        degree: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum HermitianCmd {
    /// Fit F^2 by a Hermitian form; JSON {h, residual, verdict}.
    Fit {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// euclid | l1 | linf | path to a JSON file {"re": [[..]], "im": [[..]]}
        #[arg(long, default_value = "euclid")]
        metric: String,
        #[arg(long, default_value_t = 256)]
        samples: usize,
    },
}

fn parse_plane(s: &str) -> Result<[f64; 8], String> {
    let vals: Vec<f64> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|e| format!("bad coordinate {t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    vals.try_into()
        .map_err(|v: Vec<f64>| format!("a plane needs 8 coordinates, got {}", v.len()))
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(gcos_core::Error),
    Io(std::io::Error),
    /// The acceptance suite ran and something failed; the table is already printed.
    Failed,
}

impl From<gcos_core::Error> for CliError {
    fn from(e: gcos_core::Error) -> Self {
        CliError::Numeric(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    inner_product: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    condition: Option<f64>,
}

fn error_record(e: &gcos_core::Error) -> ErrorRecord<'static> {
    use gcos_core::Error::*;
    let (kind, inner_product, condition) = match e {
        DegeneratePlane { .. } => ("degenerate_plane", None, None),
        SingularSystem {
            condition,
            inner_product,
        } => ("singular_system", Some(*inner_product), Some(*condition)),
        NotHomogeneous { .. } => ("not_homogeneous", None, None),
        NotUnit { .. } => ("not_unit", None, None),
        RankDeficientSample { .. } => ("rank_deficient_sample", None, None),
        InvalidArgument(_) => ("invalid_argument", None, None),
    };
    ErrorRecord {
        error: kind,
        message: e.to_string(),
        inner_product,
        condition,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let flags = Overrides {
        quadrature_order: cli.order,
        output_format: cli.format,
        seed: cli.seed,
        tolerances: cli.tolerances.clone(),
    };
    let result = RunConfig::load(cli.config.as_deref(), flags).and_then(|cfg| commands::run(&cli, &cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(e)) => {
            if let Ok(s) = serde_json::to_string(&error_record(&e)) {
                println!("{s}");
            }
            ExitCode::from(1)
        }
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(CliError::Failed) => ExitCode::from(1),
    }
}
