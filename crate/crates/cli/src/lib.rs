//! `foldlab`: runs the multiplier, dyadic and sharpness experiments and writes
//! their CSV, JSON and SVG artifacts together with a run manifest.

pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;
pub mod svg;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

pub use commands::Outcome;
pub use config::Settings;
pub use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "foldlab", version, about = "Fold multiplier experiments")]
pub struct Cli {
    /// Flat `key = value` file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (default `foldlab-out`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for random fields (default 24301).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads, or `auto`.
    #[arg(long, global = true)]
    pub threads: Option<String>,
    /// Absolute and relative quadrature tolerance.
    #[arg(long, global = true)]
    pub quad_tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table and plot of Im m(μ, 1); writes m_table.csv and figure2.svg.
    MultiplierPlot(PlotArgs),
    /// Zero μ₀ of m(·, 1) and α = μ₀⁻³.
    Zero,
    /// Derivative of m(·, 1) against the Airy identity.
    AiryCheck(AiryArgs),
    /// Decay of a fractional multiplier on circles |ξ| = R.
    Decay(DecayArgs),
    /// Block norms of the dyadic decomposition and their exponent fits.
    Blocks(BlocksArgs),
    /// Almost-orthogonality of the blocks.
    Orthogonality(OrthoArgs),
    /// Non-invertibility counterexample suite.
    Counterexample(CounterexampleArgs),
    /// Sobolev exponent r for given orders.
    Exponent(ExponentArgs),
    /// Apply a multiplier to a field on a periodic grid.
    Apply(ApplyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::MultiplierPlot(_) => "multiplier-plot",
            Command::Zero => "zero",
            Command::AiryCheck(_) => "airy-check",
            Command::Decay(_) => "decay",
            Command::Blocks(_) => "blocks",
            Command::Orthogonality(_) => "orthogonality",
            Command::Counterexample(_) => "counterexample",
            Command::Exponent(_) => "exponent",
            Command::Apply(_) => "apply",
        }
    }
}

#[derive(Debug, Args, Default)]
pub struct PlotArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub mu_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu_max: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args, Default)]
pub struct AiryArgs {
    /// Grid spacing on [-10, 10].
    #[arg(long)]
    pub h: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct DecayArgs {
    /// cubic, parabola or log
    #[arg(long)]
    pub curve: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<f64>,
    #[arg(long)]
    pub r_min_exp: Option<i32>,
    #[arg(long)]
    pub r_max_exp: Option<i32>,
}

#[derive(Debug, Args, Default)]
pub struct BlocksArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub jmin: Option<u32>,
    #[arg(long)]
    pub jmax: Option<u32>,
    /// model or fractional
    #[arg(long)]
    pub symbol: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct OrthoArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<f64>,
    #[arg(long)]
    pub j: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub kp_min: Option<u32>,
    #[arg(long)]
    pub kp_max: Option<u32>,
}

#[derive(Debug, Args, Default)]
pub struct CounterexampleArgs {
    #[arg(long)]
    pub terms: Option<usize>,
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Added to α (0 keeps the bumps on the vanishing cubic).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_shift: Option<f64>,
    /// `standard` or `constant:<c>`
    #[arg(long)]
    pub coefficients: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct ExponentArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<f64>,
    /// Codimension for the clean-graph table.
    #[arg(long)]
    pub codim: Option<u32>,
}

#[derive(Debug, Args, Default)]
pub struct ApplyArgs {
    /// hilbert, identity, fractional-cubic, fractional-parabola or log-cubic
    #[arg(long)]
    pub operator: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<f64>,
    /// identity, packet or random (ignored with --input)
    #[arg(long)]
    pub field: Option<String>,
    /// Field file to read instead of a generated field.
    #[arg(long)]
    pub input: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub period: Option<f64>,
}

/// Parses the global settings, runs the command and writes the manifest.
pub fn run(cli: Cli) -> ExitCode {
    let start = Instant::now();
    let argv: Vec<String> = std::env::args().collect();
    match execute(&cli, &argv, start) {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(error::EXIT_FAILED_VERDICT)
            }
        }
        Err(e) => {
            eprintln!("foldlab: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli, argv: &[String], start: Instant) -> Result<Outcome> {
    let mut settings = Settings::load(cli.config.as_deref())?;
    let ctx = commands::Context::resolve(cli, &mut settings)?;
    let outcome = ctx.install_pool(|| commands::dispatch(&cli.command, &ctx, &mut settings))??;
    manifest::write(
        &ctx,
        &cli.command,
        &settings,
        argv,
        &outcome,
        start.elapsed(),
    )?;
    Ok(outcome)
}
