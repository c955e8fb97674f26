use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cyclic_embed::cli::{self, Command, ModeChoice, RunConfig};

#[derive(Parser)]
#[command(name = "cyclic-embed", version, about = "Embed linear codes in cyclic codes and verify the certificates")]
struct Args {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a certificate for a code file.
    Embed {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Largest cyclic length to accept.
        #[arg(long, env = cli::BOUND_ENV)]
        bound: Option<u64>,
    },
    /// Check a certificate against a code file; exits 0 iff it holds.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
        /// Write the report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Append per-step wall time to the report.
        #[arg(long)]
        timings: bool,
    },
    /// Embed and verify the built-in corpus.
    Demo {
        #[arg(long, env = cli::BOUND_ENV)]
        bound: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Oracle,
    Structural,
    Auto,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let default = cyclic_embed::embed::DEFAULT_BOUND;
    let config = match args.command {
        Cmd::Embed { input, out, bound } => RunConfig { command: Command::Embed { input, out }, bound: bound.unwrap_or(default), seed: 0 },
        Cmd::Verify { input, cert, mode, report, timings } => {
            let mode = match mode {
                Mode::Oracle => ModeChoice::Oracle,
                Mode::Structural => ModeChoice::Structural,
                Mode::Auto => ModeChoice::Auto,
            };
            RunConfig { command: Command::Verify { input, cert, mode, report, timings }, bound: default, seed: 0 }
        }
        Cmd::Demo { bound, seed } => RunConfig { command: Command::Demo, bound: bound.unwrap_or(default), seed },
    };
    match cli::run(&config, &mut std::io::stdout().lock()) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
