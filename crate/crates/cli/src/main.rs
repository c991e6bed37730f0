//! Command-line surface: loads JSON documents, dispatches to the library,
//! and writes deterministic JSON (or DOT) results.
//!
//! Exit codes: 0 on success, 1 on a domain error (the result document then
//! carries a machine-readable `error` field), 2 on usage errors.

mod workspace;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use workspace::{UsageError, Workspace};

#[derive(Parser)]
#[command(
    name = "graphact",
    about = "Group actions on directed multigraphs: skew products, quotients, coverings, \
             fundamental groups, and K-theory witnesses",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Input JSON document (repeatable). Documents are recognized by their
    /// keys: graphs, actions, cocycles, groups, generating sets, fiber
    /// actions, circle descriptions, matrices.
    #[arg(long = "in", value_name = "FILE")]
    inputs: Vec<PathBuf>,

    /// Write the result here instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Ball radius for truncated constructions.
    #[arg(long, value_name = "N")]
    radius: Option<usize>,

    /// Base vertex for covers (default: minimal vertex id).
    #[arg(long, value_name = "VERTEX")]
    base: Option<String>,

    /// Output format; `dot` is valid only for graph-valued results.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a graph document and echo it in canonical form.
    Validate(CommonArgs),
    /// Classify vertices into sources, finite receivers and regular ones.
    Classes(CommonArgs),
    /// Quotient a graph by a free finite-group action.
    Quotient(CommonArgs),
    /// Build the skew product of a graph and a cocycle.
    Skew(CommonArgs),
    /// Trivialize a free action: quotient, cocycle and the rebuilt product.
    ExtractCocycle(CommonArgs),
    /// Build a Cayley graph from a generating set.
    Cayley(CommonArgs),
    /// Free presentation of the fundamental group of a graph.
    Pi1(CommonArgs),
    /// Unfold a universal-cover ball of reduced walks.
    Cover(CommonArgs),
    /// Build the derived cover of a cocycle through a fiber action.
    DerivedCover(CommonArgs),
    /// Ball of the Bass-Serre tree of B(n,m) for a circle description.
    BsTree(CommonArgs),
    /// Fundamental group, universal cover and algebra flags of a circle graph.
    Circle(CommonArgs),
    /// K-theory of a graph algebra, or the Smith normal form of a matrix.
    Ktheory(CommonArgs),
    /// Compare the K-theory of two graphs as a Morita-equivalence witness.
    Morita(CommonArgs),
    /// Run the property suites applicable to the supplied documents.
    Check(CommonArgs),
    /// Render a graph as DOT text.
    ExportDot(CommonArgs),
}

impl Command {
    fn args(&self) -> &CommonArgs {
        match self {
            Command::Validate(a)
            | Command::Classes(a)
            | Command::Quotient(a)
            | Command::Skew(a)
            | Command::ExtractCocycle(a)
            | Command::Cayley(a)
            | Command::Pi1(a)
            | Command::Cover(a)
            | Command::DerivedCover(a)
            | Command::BsTree(a)
            | Command::Circle(a)
            | Command::Ktheory(a)
            | Command::Morita(a)
            | Command::Check(a)
            | Command::ExportDot(a) => a,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args = cli.command.args();

    let workspace = match Workspace::load(&args.inputs) {
        Ok(ws) => ws,
        Err(err) => return emit_domain_error(args, &err),
    };

    match workspace::dispatch(&cli.command, args, &workspace) {
        Ok(output) => match write_output(args, &output) {
            Ok(()) => ExitCode::SUCCESS,
            Err(msg) => usage_error(&msg),
        },
        Err(UsageError::Usage(msg)) => usage_error(&msg),
        Err(UsageError::Domain(err)) => emit_domain_error(args, &err),
        Err(UsageError::CheckFailed(report)) => {
            let _ = write_output(args, &report);
            ExitCode::from(1)
        }
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn emit_domain_error(args: &CommonArgs, err: &graphact::Error) -> ExitCode {
    let doc = serde_json::json!({
        "error": err.name(),
        "message": err.to_string(),
    });
    let text = format!("{}\n", serde_json::to_string_pretty(&doc).unwrap());
    let _ = write_text(args, &text);
    ExitCode::from(1)
}

fn write_output(args: &CommonArgs, output: &workspace::Output) -> Result<(), String> {
    let text = match output {
        workspace::Output::Json(value) => {
            format!("{}\n", serde_json::to_string_pretty(value).unwrap())
        }
        workspace::Output::Text(text) => text.clone(),
    };
    write_text(args, &text)
}

fn write_text(args: &CommonArgs, text: &str) -> Result<(), String> {
    match &args.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
