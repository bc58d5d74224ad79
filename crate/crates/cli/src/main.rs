use std::io;
use std::process::ExitCode;

use clap::Parser;
use ellpos_cli::{run, Cli, CoreEvaluator};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = run(&cli, &CoreEvaluator, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(status)
}
