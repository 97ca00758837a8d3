mod args;
mod commands;
mod output;

use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;

use args::Cli;

const EXIT_VALIDATION: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

fn run(cli: &Cli) -> Result<()> {
    let path = output::resolve_output(cli);
    if let Some(p) = &path {
        if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
            if !dir.is_dir() {
                anyhow::bail!("output directory {} does not exist", dir.display());
            }
        }
    }
    let table = perclace::mc::with_workers(cli.workers, || commands::execute(&cli.command))??;
    let text = output::render(cli, commands::seed_of(&cli.command), &table)?;
    output::emit(path.as_deref(), &text)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<perclace::Error>() {
        Some(e) if e.is_resource_limit() => EXIT_RESOURCE,
        _ => EXIT_VALIDATION,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
