use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use conflap_cli::{run, CliError, Experiment, ExperimentConfig, Params};

/// Runs a named experiment and writes its CSV/JSON artifacts plus a summary.
#[derive(Debug, Parser)]
#[command(name = "conflap", version)]
struct Cli {
    experiment: Experiment,
    /// JSON config; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    params: Params,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match go(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let record = serde_json::json!({ "error": e.to_string(), "exit": e.exit_code() });
            eprintln!("{record}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn go(cli: Cli) -> Result<bool, CliError> {
    let cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(e) = cfg.experiment {
        if e != cli.experiment {
            return Err(CliError::Usage(format!(
                "config is for {} but {} was requested",
                e.name(),
                cli.experiment.name()
            )));
        }
    }
    let params = cli.params.overlay(cfg.params);
    let out_dir = cli
        .out
        .or(cfg.out)
        .unwrap_or_else(|| PathBuf::from("results").join(cli.experiment.name()));
    let outcome = run(cli.experiment, &params)?;
    outcome.write(&out_dir)?;
    if let Some(report) = outcome.artifact("kappa.json") {
        println!("{report}");
    }
    print!("{}", outcome.summary_text());
    if !outcome.pass {
        let failed: Vec<_> = outcome.checks.iter().filter(|c| !c.pass).collect();
        eprintln!(
            "{}",
            serde_json::json!({ "experiment": outcome.experiment, "failed": failed, "exit": 1 })
        );
    }
    Ok(outcome.pass)
}
