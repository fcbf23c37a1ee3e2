//! Command-line front end: instance generation, analysis, rescaling,
//! verification suites and benchmarks.

mod args;
mod commands;
pub mod io;

pub use args::{Cli, Command};
pub use commands::{parse_grid, EXIT_FAILED};

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: &Cli) -> anyhow::Result<i32> {
    match &cli.command {
        Command::Gen(a) => commands::gen(a, cli.seed),
        Command::Analyze(a) => commands::analyze(a, cli.seed),
        Command::Rescale(a) => commands::rescale(a, cli.seed),
        Command::Verify(a) => commands::verify(a, cli.seed),
        Command::Bench(a) => commands::bench(a, cli.seed),
    }
}
