use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use harrod::OutputKind;
use harrod_cli::audit::{audit_report, calibrate_report};
use harrod_cli::csv::read_observations;
use harrod_cli::{parse_scenario, run_scenario, EXIT_ERROR, EXIT_OK};

#[derive(Parser)]
#[command(
    name = "harrod",
    version,
    about = "Finite-time crisis in Harrod-type growth models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate scenarios and write the requested outputs. Several config
    /// files run concurrently, each into its own subdirectory.
    Run {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Print the crisis report only.
    Crisis { config: PathBuf },
    /// Fit a growth law to capital observations (`tau,value`) and extrapolate its crisis.
    Calibrate {
        observations: PathBuf,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        k0: f64,
        #[arg(long)]
        degree: usize,
    },
    /// Discrete/continuous divergence, accounting and dimensional audits.
    Audit { config: PathBuf },
}

fn load(path: &Path) -> Result<harrod::ScenarioConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_scenario(&text).with_context(|| format!("in {}", path.display()))
}

fn run_one(path: &Path, out_dir: &Path) -> Result<u8> {
    let config = load(path)?;
    let run = run_scenario(&config).with_context(|| format!("running {}", path.display()))?;
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let write = |name: &str, body: &str| {
        let target = out_dir.join(name);
        fs::write(&target, body).with_context(|| format!("writing {}", target.display()))
    };
    if config.outputs.contains(&OutputKind::Csv) {
        write("trajectory.csv", &run.outputs.trajectory_csv)?;
    }
    if config.outputs.contains(&OutputKind::Report) {
        write("report.txt", &run.outputs.report_text)?;
        write("report.kv", &run.outputs.report_machine)?;
    }
    if let Some(svg) = &run.outputs.plot_svg {
        write("plot.svg", svg)?;
    }
    print!("{}", run.outputs.report_text);
    Ok(run.status)
}

fn run_batch(configs: &[PathBuf], out_dir: &Path) -> u8 {
    if let [single] = configs {
        return run_one(single, out_dir).unwrap_or_else(|e| {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        });
    }
    let results: Vec<Result<u8>> = std::thread::scope(|s| {
        let handles: Vec<_> = configs
            .iter()
            .enumerate()
            .map(|(k, path)| {
                let stem = path.file_stem().map_or_else(
                    || format!("scenario{k}"),
                    |s| s.to_string_lossy().into_owned(),
                );
                let dir = out_dir.join(stem);
                s.spawn(move || run_one(path, &dir))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .unwrap_or_else(|_| Err(anyhow::anyhow!("scenario thread panicked")))
            })
            .collect()
    });
    let mut status = EXIT_OK;
    for (path, r) in configs.iter().zip(results) {
        match r {
            Ok(code) if status == EXIT_OK => status = code,
            Ok(_) => {}
            Err(e) => {
                eprintln!("error: {}: {e:#}", path.display());
                status = EXIT_ERROR;
            }
        }
    }
    status
}

fn execute(command: Command) -> Result<u8> {
    match command {
        Command::Run { configs, out_dir } => Ok(run_batch(&configs, &out_dir)),
        Command::Crisis { config } => {
            let config = load(&config)?;
            let run = run_scenario(&config)?;
            print!("{}", run.outputs.report_machine);
            Ok(run.status)
        }
        Command::Calibrate {
            observations,
            sigma,
            k0,
            degree,
        } => {
            let text = fs::read_to_string(&observations)
                .with_context(|| format!("reading {}", observations.display()))?;
            let samples = read_observations(&text)
                .with_context(|| format!("in {}", observations.display()))?;
            print!("{}", calibrate_report(samples, sigma, k0, degree)?);
            Ok(EXIT_OK)
        }
        Command::Audit { config } => {
            print!("{}", audit_report(&load(&config)?)?);
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    // clap reports usage errors with status 2, which is reserved for a crisis.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { EXIT_OK });
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
