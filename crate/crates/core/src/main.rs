use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spinblimp::config::{load_config, RunConfig};
use spinblimp::experiments::{calibration_report, linearization_report, run};
use spinblimp::sim::{Model, Outcome};

#[derive(Parser)]
#[command(name = "spinblimp", version, about = "Spinning-vehicle flight simulator and experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Run configuration file (`section.key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path prefix; artifacts are written as <out>.csv,
    /// <out>.metrics.txt, <out>.plot.csv.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override sim.seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override sim.dt (seconds).
    #[arg(long)]
    dt: Option<f64>,
    /// Override sim.duration (seconds).
    #[arg(long)]
    duration: Option<f64>,
    /// Override sim.model.
    #[arg(long, value_parser = parse_model)]
    model: Option<Model>,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the configured experiment and write CSV/metrics/plot files.
    Run(CommonOpts),
    /// Evaluate the planar linearization and its finite-difference residual.
    Analyze {
        #[command(flatten)]
        common: CommonOpts,
        /// Produce the linearization report.
        #[arg(long)]
        linearize: bool,
    },
    /// Solve for the lift coefficient (or Lissajous time scale) by bisection.
    Calibrate(CommonOpts),
}

fn parse_model(s: &str) -> Result<Model, String> {
    match s {
        "full" => Ok(Model::Full),
        "simplified" => Ok(Model::Simplified),
        _ => Err(format!("expected full|simplified, got `{s}`")),
    }
}

fn load(common: &CommonOpts) -> Result<RunConfig, String> {
    let mut cfg = match &common.config {
        Some(path) => load_config(path).map_err(|e| e.to_string())?,
        None => spinblimp::config::parse_config("").expect("empty config is valid"),
    };
    if let Some(seed) = common.seed {
        cfg.sim.seed = seed;
    }
    if let Some(dt) = common.dt {
        cfg.sim.dt = dt;
    }
    if let Some(duration) = common.duration {
        cfg.sim.duration = Some(duration);
    }
    if let Some(model) = common.model {
        cfg.sim.model = model;
    }
    Ok(cfg)
}

fn out_path(common: &CommonOpts, cfg: &RunConfig) -> PathBuf {
    common
        .out
        .clone()
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| PathBuf::from("out/run"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(common) => {
            let cfg = match load(&common) {
                Ok(cfg) => cfg,
                Err(e) => {
                    eprintln!("config error: {e}");
                    return ExitCode::from(2);
                }
            };
            let out = out_path(&common, &cfg);
            match run(&cfg, &out) {
                Ok(artifacts) => {
                    println!(
                        "wrote {}, {}, {}",
                        artifacts.csv_path.display(),
                        artifacts.metrics_path.display(),
                        artifacts.plot_path.display()
                    );
                    if let Some(m) = &artifacts.metrics {
                        println!("mean_e = {}  max_e = {}  rmse = {}", m.mean_e, m.max_e, m.rmse);
                    }
                    print!("{}", artifacts.monitor_report);
                    match artifacts.log.outcome {
                        Outcome::Diverged { step, t } => {
                            eprintln!("simulation diverged at step {step} (t = {t}); partial log flushed");
                            ExitCode::from(3)
                        }
                        Outcome::Completed if !artifacts.monitors_passed => {
                            eprintln!("one or more monitors failed");
                            ExitCode::from(4)
                        }
                        Outcome::Completed => ExitCode::SUCCESS,
                    }
                }
                Err(e) => {
                    eprintln!("run failed: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Command::Analyze { common, linearize } => {
            if !linearize {
                eprintln!("nothing to do: pass --linearize");
                return ExitCode::from(2);
            }
            let cfg = match load(&common) {
                Ok(cfg) => cfg,
                Err(e) => {
                    eprintln!("config error: {e}");
                    return ExitCode::from(2);
                }
            };
            let report = linearization_report(&cfg.analyze);
            print!("{report}");
            if let Some(out) = &common.out {
                if let Err(e) = write_report(out, &report) {
                    eprintln!("failed to write report: {e}");
                    return ExitCode::FAILURE;
                }
            }
            ExitCode::SUCCESS
        }
        Command::Calibrate(common) => {
            let cfg = match load(&common) {
                Ok(cfg) => cfg,
                Err(e) => {
                    eprintln!("config error: {e}");
                    return ExitCode::from(2);
                }
            };
            match calibration_report(&cfg) {
                Ok(report) => {
                    print!("{report}");
                    if let Some(out) = &common.out {
                        if let Err(e) = write_report(out, &report) {
                            eprintln!("failed to write report: {e}");
                            return ExitCode::FAILURE;
                        }
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("calibration failed: {e}");
                    ExitCode::FAILURE
                }
            }
        }
    }
}

fn write_report(out: &std::path::Path, report: &str) -> std::io::Result<()> {
    if let Some(dir) = out.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let mut name = out.as_os_str().to_os_string();
    name.push(".report.txt");
    std::fs::write(std::path::PathBuf::from(name), report)
}
