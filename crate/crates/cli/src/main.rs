use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use equidim_cli::run::{run, Cli, RunConfig};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let cfg = RunConfig::resolve(&cli.args);
    let outcome = run(&cli.command, &cfg);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(outcome.code as u8)
}
