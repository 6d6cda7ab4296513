use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Parser;

use floquet_hhg::io::{parse_with_overrides, run_command, write_dataset, Command};

/// Complex Floquet spectral analysis of a driven emitter in a 1D continuum.
#[derive(Debug, Parser)]
#[command(name = "floquet-hhg", version)]
struct Cli {
    /// One of eigen, spectrum, spatial, evolve, compare, sweep.
    command: String,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `out` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `key=value` overrides; dotted keys reach nested sections.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

fn run(cli: &Cli) -> Result<()> {
    let command: Command = cli.command.parse()?;
    let text = std::fs::read_to_string(&cli.config).with_context(|| format!("reading {}", cli.config.display()))?;
    let config = parse_with_overrides(&text, &cli.overrides)?;
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from(&config.out));
    let start = Instant::now();
    let datasets = run_command(command, &config).with_context(|| format!("{} failed", command.name()))?;
    let elapsed = start.elapsed().as_secs_f64();
    for d in &datasets {
        let w = write_dataset(d, &out, elapsed)?;
        println!("{}", w.csv.display());
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<floquet_hhg::Error>() {
        Some(e) if e.is_numerical() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
