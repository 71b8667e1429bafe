use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use multicoh_cli::commands::{self, Format, EXIT_INVALID};

/// Checks finite Cat-multicategory fixtures and rigidifies pseudo symmetric
/// multifunctors.
///
/// Exit status: 0 pass, 1 check failure, 2 invalid input.
/// MULTICOH_THREADS caps the worker threads.
#[derive(Parser)]
#[command(name = "multicoh", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Arity bound; for files it must match the document.
    #[arg(long, global = true)]
    arity_bound: Option<usize>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output file (rigidify).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Runs the checker for the document's kind.
    Check { path: PathBuf },
    /// Writes phi(F) for a pseudo symmetric document.
    Rigidify { path: PathBuf },
    /// Verifies that phi and eta* invert each other on a document.
    Roundtrip { path: PathBuf },
    /// Checks the adjunction identities on generated corpora.
    AdjunctionDemo {
        /// Seeded weight shifts added to the builder corpora.
        #[arg(long, default_value_t = 6)]
        size: usize,
    },
    /// Rigidifies the pseudo symmetric algebra T -> End(Z/k).
    AlgebraDemo {
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("MULTICOH_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("MULTICOH_THREADS={v} is not a number"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_INVALID as u8);
    }
    let n = cli.arity_bound;
    let (outcome, document) = match &cli.command {
        Command::Check { path } => (commands::check(path, n), None),
        Command::Rigidify { path } => commands::rigidify(path, cli.out.as_deref(), n),
        Command::Roundtrip { path } => (commands::roundtrip(path, n), None),
        Command::AdjunctionDemo { size } => (commands::adjunction_demo(cli.seed, n.unwrap_or(3), *size), None),
        Command::AlgebraDemo { k } => (commands::algebra(*k, n.unwrap_or(3)), None),
    };
    let mut stdout = std::io::stdout().lock();
    let rendered = outcome.render(cli.format);
    let written = match document {
        Some(doc) => {
            eprint!("{rendered}");
            stdout.write_all(doc.as_bytes())
        }
        None => stdout.write_all(rendered.as_bytes()),
    };
    if written.is_err() {
        return ExitCode::from(EXIT_INVALID as u8);
    }
    ExitCode::from(outcome.exit_code as u8)
}
