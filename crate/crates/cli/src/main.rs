use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use fundom::ProjectionKind;

mod commands;
mod records;

/// Canonical forms under permutation group actions.
#[derive(Parser)]
#[command(name = "fundom", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonicalize JSON-lines records.
    Project(ProjectArgs),
    /// Run a verification suite and print a JSON report.
    Verify(VerifyArgs),
    /// Classify row/column-permuted Cayley tables of the groups of order 8.
    CayleyDemo(CayleyArgs),
    /// Dirichlet projection by discrete descent.
    Dirichlet(DirichletArgs),
}

#[derive(Args)]
struct Io {
    /// JSON-lines input, `-` for stdin.
    #[arg(long, default_value = "-")]
    input: String,
    /// JSON-lines output, `-` for stdout.
    #[arg(long, default_value = "-")]
    output: String,
    /// Add the group element that produced each canonical form.
    #[arg(long)]
    witness: bool,
}

#[derive(Args)]
struct ProjectArgs {
    /// Group spec JSON file.
    #[arg(long)]
    group: PathBuf,
    /// asc, desc, asc-avg or desc-avg.
    #[arg(long, default_value = "asc")]
    projection: ProjectionKind,
    #[command(flatten)]
    io: Io,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    group: PathBuf,
    /// invariance, counting, gallery, transversal, image, conjugation,
    /// idempotence or dirichlet-oracle.
    #[arg(long)]
    suite: String,
    #[arg(long, default_value = "asc")]
    projection: ProjectionKind,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relabeling for the conjugation suite, in cycle notation.
    #[arg(long)]
    relabel: Option<String>,
    /// Report destination, `-` for stdout.
    #[arg(long, default_value = "-")]
    output: String,
}

#[derive(Args)]
struct CayleyArgs {
    #[arg(long, default_value_t = 2000)]
    per_class: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "-")]
    output: String,
}

#[derive(Args)]
struct DirichletArgs {
    #[arg(long)]
    group: PathBuf,
    #[arg(long, default_value_t = fundom::dirichlet::DEFAULT_MAX_STEPS)]
    max_steps: usize,
    /// Restart from every cyclic row/column shift (two-factor tensors).
    #[arg(long)]
    multi_seed: bool,
    /// Compare each record against the exact minimiser and report the
    /// match rate on stderr.
    #[arg(long)]
    oracle: bool,
    #[command(flatten)]
    io: Io,
}

fn write_json(path: &str, value: &serde_json::Value) -> Result<()> {
    let mut out = commands::open_output(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// `Ok(true)` on success, `Ok(false)` when a verification failed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Project(args) => {
            let spec = commands::load_spec(&args.group)?;
            let mut input = commands::open_input(&args.io.input)?;
            let mut output = commands::open_output(&args.io.output)?;
            commands::project(
                spec,
                args.projection,
                args.io.witness,
                &mut input,
                &mut output,
            )?;
            Ok(true)
        }
        Command::Verify(args) => {
            let spec = commands::load_spec(&args.group)?;
            let opts = commands::VerifyOptions {
                suite: args.suite,
                kind: args.projection,
                trials: args.trials,
                seed: args.seed,
                relabel: args.relabel,
            };
            let report = commands::verify(spec, &opts)?;
            write_json(&args.output, &serde_json::to_value(&report)?)?;
            Ok(report.passed())
        }
        Command::CayleyDemo(args) => {
            let report = commands::cayley(args.per_class, args.seed)?;
            write_json(&args.output, &serde_json::to_value(&report)?)?;
            Ok(report.passed())
        }
        Command::Dirichlet(args) => {
            let spec = commands::load_spec(&args.group)?;
            let opts = commands::DirichletOptions {
                max_steps: args.max_steps,
                multi_seed: args.multi_seed,
                oracle: args.oracle,
                witness: args.io.witness,
            };
            let mut input = commands::open_input(&args.io.input)?;
            let mut output = commands::open_output(&args.io.output)?;
            if let Some(summary) = commands::dirichlet(spec, &opts, &mut input, &mut output)? {
                eprintln!("{summary}");
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
