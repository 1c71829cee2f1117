use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use unmixed::Field;

mod commands;

#[derive(Parser, Debug)]
#[command(name = "unmixed", version, about = "Resolutions and invariants of unmixed bipartite graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the invariant report for one graph or lattice file.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run the property suite on a file, a directory of files, or the fixtures.
    Verify {
        /// File or directory; the built-in fixtures when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Flip one differential sign before checking.
        #[arg(long, hide = true)]
        debug_mutate: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Generate random lattices, verify them and write the results.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the last total Betti number with |B_G| and record strict cases.
    SearchTightness {
        /// Use the built-in fixtures (ignores --n/--count/--seed).
        #[arg(long, conflicts_with = "input")]
        fixtures: bool,
        /// File or directory of instances.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Write the built-in fixtures as lattice and graph files.
    Fixtures {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, value_enum, default_value_t = LevelArg::Formulas)]
    level: LevelArg,
    /// q for the rationals or p:<prime>.
    #[arg(long, default_value = "q")]
    field: Field,
    #[arg(long)]
    no_timestamp: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum LevelArg {
    Formulas,
    Oracle,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = match &cli.command {
        Command::Analyze { common, .. }
        | Command::Verify { common, .. }
        | Command::Random { common, .. }
        | Command::SearchTightness { common, .. } => common.jobs,
        Command::Fixtures { .. } => None,
    };
    if let Some(j) = jobs {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let result = match cli.command {
        Command::Analyze { input, common } => commands::analyze(&input, &common),
        Command::Verify { input, debug_mutate, common } => commands::verify(input.as_deref(), debug_mutate, &common),
        Command::Random { n, count, seed, out, common } => commands::random(n, count, seed, out.as_deref(), &common),
        Command::SearchTightness { fixtures, input, n, count, seed, out, common } => {
            let source = if fixtures {
                commands::Source::Fixtures
            } else if let Some(p) = input {
                commands::Source::Path(p)
            } else {
                commands::Source::Random { n, count, seed }
            };
            commands::search_tightness(source, out.as_deref(), &common)
        }
        Command::Fixtures { out, format } => commands::fixtures(&out, format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.report(),
    }
}
