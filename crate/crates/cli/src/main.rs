mod args;
mod commands;
mod output;
mod verify;

use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use args::Cli;
use commands::Body;
use output::{emit, to_sorted_json, CliError, CliResult};

fn init_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("CLUSTERX_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Input(format!("CLUSTERX_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Input(format!("cannot start {n} threads: {e}")))
}

fn run(cli: &Cli) -> CliResult<()> {
    init_threads()?;
    let outcome = commands::run(&cli.command, cli.rng_seed)?;
    let text = match outcome.body {
        Body::Text(t) => t,
        Body::Json(result) => to_sorted_json(&json!({
            "command": commands::name(&cli.command),
            "rng_seed": cli.rng_seed,
            "result": result,
        })),
    };
    emit(&text, cli.out.as_deref())?;
    outcome.failure.map_or(Ok(()), Err)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("clusterx: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
