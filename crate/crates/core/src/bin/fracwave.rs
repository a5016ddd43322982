use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fracwave::cli_io::{configure_threads, load_config, run, Overrides, RunError};

#[derive(Parser)]
#[command(name = "fracwave", version, about = "Fractional Zener acoustics: dispersion, relaxation spectra, causality checks and fits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task listed in the configuration.
    Run(Common),
    /// Run only the fit task of the configuration.
    Fit(Common),
}

#[derive(Args)]
struct Common {
    config: PathBuf,
    /// Output directory (overrides output.dir).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write SVG plots.
    #[arg(long)]
    svg: bool,
    /// Sweep density (overrides sweep.points_per_decade).
    #[arg(long)]
    points_per_decade: Option<usize>,
    #[arg(long)]
    quiet: bool,
}

fn execute(args: &Common, fit_only: bool) -> Result<Vec<String>, RunError> {
    configure_threads()?;
    let overrides = Overrides {
        out_dir: args.out.clone(),
        svg: args.svg,
        points_per_decade: args.points_per_decade,
        fit_only,
    };
    let config = overrides.apply(load_config(&args.config)?)?;
    let base = args.config.parent().unwrap_or(Path::new("."));
    let report = run(&config, base)?;
    Ok(report.artifacts.iter().map(|a| config.output.dir.join(a).display().to_string()).collect())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, fit_only) = match &cli.command {
        Command::Run(a) => (a, false),
        Command::Fit(a) => (a, true),
    };
    match execute(args, fit_only) {
        Ok(files) => {
            if !args.quiet {
                for f in files {
                    println!("wrote {f}");
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("fracwave: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
