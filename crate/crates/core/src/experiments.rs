//! Experiment runner: build the initial state and controller for a parsed
//! [`RunConfig`], simulate, and emit the artifact set
//! (`<out>.csv`, `<out>.metrics.txt`, `<out>.plot.csv`).

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::analysis::{
    self, calibrate_k_lift, fd_convergence_order, finite_difference_check, hover_omega,
    linearize_planar, xy_uub_report,
};
use crate::behavior::RandomWalkController;
use crate::config::{
    AnalyzeConfig, CalibrateConfig, CalibrateKind, Experiment, MonitorConfig, RunConfig,
};
use crate::control::{hover_controller, TrackingController};
use crate::sim::{simulate, Controller, Outcome, SimConfig, SimLog, CSV_HEADER};
use crate::trajectory::{
    calibrate_speed_scale, lissajous_cross_track, lissajous_ref, tracking_metrics, triangle_ref,
    CrossTrackStats, TrackingMetrics,
};
use crate::types::{State, Vec3};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Sim(#[from] crate::sim::SimError),
    #[error(transparent)]
    Analysis(#[from] crate::analysis::AnalysisError),
    #[error(transparent)]
    Trajectory(#[from] crate::trajectory::TrajectoryError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("metrics file round-trip failed: {0}")]
    Metrics(String),
}

/// Everything a `run` invocation produced.
pub struct RunArtifacts {
    pub csv_path: PathBuf,
    pub metrics_path: PathBuf,
    pub plot_path: PathBuf,
    pub log: SimLog,
    pub metrics: Option<TrackingMetrics>,
    pub cross_track: Option<CrossTrackStats>,
    pub monitors_passed: bool,
    pub monitor_report: String,
}

impl RunArtifacts {
    pub fn succeeded(&self) -> bool {
        self.log.completed() && self.monitors_passed
    }
}

/// Append a suffix to a path, preserving any dots already in the name.
fn with_suffix(out: &Path, suffix: &str) -> PathBuf {
    let mut os = out.as_os_str().to_os_string();
    os.push(suffix);
    PathBuf::from(os)
}

fn natural_duration(experiment: &Experiment) -> f64 {
    match experiment {
        Experiment::Hover { .. } => 60.0,
        Experiment::Triangle(t) => t.lap_time(),
        Experiment::Lissajous { params, .. } => params.period(),
        Experiment::RandomWalk { .. } => 600.0,
    }
}

/// Execute the configured experiment and write the artifact set under the
/// `out` prefix. Always flushes whatever was logged, including on blow-up.
pub fn run(cfg: &RunConfig, out: &Path) -> Result<RunArtifacts, RunError> {
    let params = cfg.vehicle;
    let omega_bar = hover_omega(&params)?;

    // resolve the reference source and initial state
    let (log, lissajous_final) = match &cfg.experiment {
        Experiment::Hover { start, goal } => {
            let mut controller = hover_controller(*goal, cfg.gains);
            let initial = State::planar(*start, 0.0, omega_bar);
            (run_sim(cfg, &initial, &mut controller)?, None)
        }
        Experiment::Triangle(triangle) => {
            let triangle = *triangle;
            let mut controller =
                TrackingController::new(cfg.gains, move |t| triangle_ref(t, &triangle));
            let initial = State::planar(triangle_ref(0.0, &triangle).pos, 0.0, omega_bar);
            (run_sim(cfg, &initial, &mut controller)?, None)
        }
        Experiment::Lissajous { params: lp, target_speed } => {
            let lp = match target_speed {
                Some(target) => calibrate_speed_scale(lp, *target)?,
                None => *lp,
            };
            let mut controller =
                TrackingController::new(cfg.gains, move |t| lissajous_ref(t, &lp));
            let initial = State::planar(lissajous_ref(0.0, &lp).pos, 0.0, omega_bar);
            let mut cfg = cfg.clone();
            cfg.experiment = Experiment::Lissajous {
                params: lp,
                target_speed: None,
            };
            (run_sim(&cfg, &initial, &mut controller)?, Some(lp))
        }
        Experiment::RandomWalk { env, cfg: walk, start } => {
            let mut controller = RandomWalkController::new(
                env.clone(),
                *walk,
                cfg.gains,
                *start,
                cfg.sim.seed,
            );
            let initial = State::planar(
                Vec3::new(start.x, start.y, walk.z_d),
                0.0,
                omega_bar,
            );
            let log = run_sim(cfg, &initial, &mut controller)?;
            (log, None)
        }
    };

    // metrics and monitors
    let errors = log.tracking_errors();
    let metrics = if errors.is_empty() {
        None
    } else {
        Some(tracking_metrics(&errors)?)
    };
    let cross_track = lissajous_final
        .as_ref()
        .map(|lp| lissajous_cross_track(&log.rows, lp, 0.05 * lp.period()));
    let (monitors_passed, monitor_report) = evaluate_monitors(&log, &cfg.monitors);

    // artifacts
    if let Some(dir) = out.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let csv_path = with_suffix(out, ".csv");
    let metrics_path = with_suffix(out, ".metrics.txt");
    let plot_path = with_suffix(out, ".plot.csv");

    let mut csv = fs::File::create(&csv_path)?;
    log.write_csv(&mut csv)?;

    let mut metrics_text = String::new();
    let _ = writeln!(metrics_text, "experiment = {}", cfg.experiment.name());
    let _ = writeln!(metrics_text, "model = {}", cfg.sim.model);
    let _ = writeln!(metrics_text, "dt = {}", cfg.sim.dt);
    let _ = writeln!(metrics_text, "seed = {}", cfg.sim.seed);
    let _ = writeln!(metrics_text, "rows = {}", log.rows.len());
    match log.outcome {
        Outcome::Completed => {
            let _ = writeln!(metrics_text, "outcome = completed");
        }
        Outcome::Diverged { step, t } => {
            let _ = writeln!(metrics_text, "outcome = diverged at step {step} (t = {t})");
        }
    }
    if let Some(lp) = &lissajous_final {
        let _ = writeln!(metrics_text, "speed_scale = {}", lp.speed_scale);
        let _ = writeln!(metrics_text, "average_speed = {}", lp.average_speed());
        let _ = writeln!(metrics_text, "period = {}", lp.period());
    }
    if let Some(m) = &metrics {
        let _ = writeln!(metrics_text, "mean_e = {}", m.mean_e);
        let _ = writeln!(metrics_text, "max_e = {}", m.max_e);
        let _ = writeln!(metrics_text, "rmse = {}", m.rmse);
    }
    if let Some(ct) = &cross_track {
        let _ = writeln!(metrics_text, "cross_track_ccw_mean = {}", ct.mean_radial_ccw);
        let _ = writeln!(metrics_text, "cross_track_cw_mean = {}", ct.mean_radial_cw);
        let _ = writeln!(metrics_text, "cross_track_ccw_samples = {}", ct.samples_ccw);
        let _ = writeln!(metrics_text, "cross_track_cw_samples = {}", ct.samples_cw);
    }
    if let Some(uub) = xy_uub_report(&log.rows) {
        let _ = writeln!(metrics_text, "lyapunov_xy_initial = {}", uub.v_initial);
        let _ = writeln!(metrics_text, "lyapunov_xy_max = {}", uub.v_max);
        let _ = writeln!(metrics_text, "lyapunov_xy_ultimate_bound = {}", uub.ultimate_bound);
    }
    metrics_text.push_str(&monitor_report);
    fs::write(&metrics_path, &metrics_text)?;

    write_plot_csv(&plot_path, &log)?;

    Ok(RunArtifacts {
        csv_path,
        metrics_path,
        plot_path,
        log,
        metrics,
        cross_track,
        monitors_passed,
        monitor_report,
    })
}

fn run_sim<C: Controller>(
    cfg: &RunConfig,
    initial: &State,
    controller: &mut C,
) -> Result<SimLog, RunError> {
    let sim_cfg = SimConfig {
        dt: cfg.sim.dt,
        duration: cfg
            .sim
            .duration
            .unwrap_or_else(|| natural_duration(&cfg.experiment)),
        model: cfg.sim.model,
        seed: cfg.sim.seed,
        log_stride: cfg.sim.log_stride,
        control_stride: cfg.sim.control_stride,
    };
    Ok(simulate(initial, controller, &sim_cfg, &cfg.vehicle)?)
}

fn evaluate_monitors(log: &SimLog, monitors: &MonitorConfig) -> (bool, String) {
    let mut passed = true;
    let mut report = String::new();

    if monitors.lyapunov_z {
        let series: Vec<(f64, f64)> = log
            .rows
            .iter()
            .filter(|r| r.lyapunov_z.is_finite())
            .map(|r| (r.t, r.lyapunov_z))
            .collect();
        let mut worst: f64 = 0.0;
        for w in series.windows(2) {
            worst = worst.max(w[1].1 - w[0].1);
        }
        let ok = worst <= monitors.vz_tol;
        passed &= ok;
        let _ = writeln!(
            report,
            "monitor lyapunov_z: {} (max increase {worst}, tol {})",
            if ok { "pass" } else { "FAIL" },
            monitors.vz_tol
        );
    }
    if monitors.lyapunov_xy {
        match xy_uub_report(&log.rows) {
            Some(uub) => {
                let ok = uub.ultimate_bound < uub.v_initial;
                passed &= ok;
                let _ = writeln!(
                    report,
                    "monitor lyapunov_xy: {} (ultimate bound {} vs initial {})",
                    if ok { "pass" } else { "FAIL" },
                    uub.ultimate_bound,
                    uub.v_initial
                );
            }
            None => {
                passed = false;
                let _ = writeln!(report, "monitor lyapunov_xy: FAIL (no reference in log)");
            }
        }
    }
    (passed, report)
}

fn write_plot_csv(path: &Path, log: &SimLog) -> std::io::Result<()> {
    let stride = (log.rows.len() / 2000).max(1);
    let mut f = fs::File::create(path)?;
    writeln!(f, "t,x,y,z,ref_x,ref_y,ref_z")?;
    for row in log.rows.iter().step_by(stride) {
        writeln!(
            f,
            "{},{},{},{},{},{},{}",
            row.t, row.pos.x, row.pos.y, row.pos.z, row.ref_pos.x, row.ref_pos.y, row.ref_pos.z
        )?;
    }
    Ok(())
}

/// Recompute tracking metrics from an emitted CSV file; the result matches
/// the `.metrics.txt` values exactly (shortest-round-trip float formatting).
pub fn metrics_from_csv(path: &Path) -> Result<TrackingMetrics, RunError> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| RunError::Metrics("empty CSV".into()))?;
    if header != CSV_HEADER {
        return Err(RunError::Metrics(format!("unexpected header: {header}")));
    }
    let err_col = CSV_HEADER
        .split(',')
        .position(|c| c == "tracking_error")
        .expect("column exists");
    let mut errors = Vec::new();
    for (i, line) in lines.enumerate() {
        let field = line
            .split(',')
            .nth(err_col)
            .ok_or_else(|| RunError::Metrics(format!("row {i} too short")))?;
        let value: f64 = field
            .parse()
            .map_err(|_| RunError::Metrics(format!("row {i}: bad float `{field}`")))?;
        if value.is_finite() {
            errors.push(value);
        }
    }
    Ok(tracking_metrics(&errors)?)
}

/// Text report for `analyze --linearize`: the four partials, the
/// finite-difference residual at the configured step, and the observed
/// convergence order of the check itself.
pub fn linearization_report(cfg: &AnalyzeConfig) -> String {
    let jac = linearize_planar(&cfg.op);
    let residual = finite_difference_check(&cfg.op, cfg.fd_step);
    let order = fd_convergence_order(&cfg.op, 1e-2);
    let op = &cfg.op;
    let mut s = String::new();
    let _ = writeln!(s, "operating point:");
    let _ = writeln!(s, "  theta_xy = {}", op.theta_xy);
    let _ = writeln!(s, "  psi = {}", op.psi);
    let _ = writeln!(s, "  v_xy = {}", op.v_xy);
    let _ = writeln!(s, "  psi_dot = {}", op.psi_dot);
    let _ = writeln!(s, "  force_mag = {}", op.force_mag);
    let _ = writeln!(s, "  drag_coeff = {}", op.drag_coeff);
    let _ = writeln!(s, "  lift_coeff = {}", op.lift_coeff);
    let _ = writeln!(s, "partials:");
    let _ = writeln!(s, "  dxy_dtheta = {}", jac.dxy_dtheta);
    let _ = writeln!(s, "  dxy_dpsi = {}", jac.dxy_dpsi);
    let _ = writeln!(s, "  dxy_dv = {}", jac.dxy_dv);
    let _ = writeln!(s, "  dz_dpsidot = {}", jac.dz_dpsidot);
    let _ = writeln!(s, "finite-difference check (h = {}):", cfg.fd_step);
    let _ = writeln!(s, "  max relative error = {residual}");
    let _ = writeln!(s, "  observed convergence order (h = 1e-2) = {order}");
    s
}

/// Text report for the `calibrate` subcommand.
pub fn calibration_report(cfg: &RunConfig) -> Result<String, RunError> {
    let cal: &CalibrateConfig = &cfg.calibrate;
    let mut s = String::new();
    match cal.kind {
        CalibrateKind::KLift => {
            let result = calibrate_k_lift(&cfg.vehicle, cal.omega, cal.k_lo, cal.k_hi, cal.k_tol)?;
            let closed_form = (cfg.vehicle.m * cfg.vehicle.g - cfg.vehicle.f_b)
                / (cal.omega * cal.omega);
            let _ = writeln!(s, "calibrate k_lift at omega = {}", cal.omega);
            let _ = writeln!(s, "  bracket = [{}, {}]", cal.k_lo, cal.k_hi);
            let _ = writeln!(s, "  k_lift = {}", result.k_lift);
            let _ = writeln!(s, "  iterations = {}", result.iterations);
            let _ = writeln!(s, "  steady-state accel residual = {}", result.residual);
            let _ = writeln!(s, "  closed form (m*g - f_b)/omega^2 = {closed_form}");
            let recalibrated = crate::types::VehicleParams {
                k_lift: result.k_lift,
                ..cfg.vehicle
            };
            let _ = writeln!(
                s,
                "  hover spin at calibrated k_lift = {}",
                analysis::hover_omega(&recalibrated)?
            );
        }
        CalibrateKind::Speed => {
            let base = match &cfg.experiment {
                Experiment::Lissajous { params, .. } => *params,
                _ => crate::trajectory::LissajousParams::default(),
            };
            let calibrated = calibrate_speed_scale(&base, cal.target_speed)?;
            let _ = writeln!(s, "calibrate lissajous speed_scale");
            let _ = writeln!(s, "  target average speed = {}", cal.target_speed);
            let _ = writeln!(s, "  speed_scale = {}", calibrated.speed_scale);
            let _ = writeln!(s, "  achieved average speed = {}", calibrated.average_speed());
            let _ = writeln!(s, "  period = {}", calibrated.period());
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn hover_run_writes_all_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = parse_config("sim.duration = 5\n").unwrap();
        let out = dir.path().join("runs/hover1");
        let artifacts = run(&cfg, &out).unwrap();
        assert!(artifacts.succeeded());
        assert!(artifacts.csv_path.exists());
        assert!(artifacts.metrics_path.exists());
        assert!(artifacts.plot_path.exists());
        let metrics = artifacts.metrics.expect("hover logs a reference");
        assert!(metrics.max_e < 0.05, "hover at setpoint drifted: {metrics:?}");
    }

    #[test]
    fn metrics_round_trip_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = parse_config("sim.duration = 5\nhover.start_z = 0.8\n").unwrap();
        let out = dir.path().join("rt");
        let artifacts = run(&cfg, &out).unwrap();
        let recomputed = metrics_from_csv(&artifacts.csv_path).unwrap();
        let written = artifacts.metrics.unwrap();
        assert_eq!(format!("{}", recomputed.mean_e), format!("{}", written.mean_e));
        assert_eq!(format!("{}", recomputed.max_e), format!("{}", written.max_e));
        assert_eq!(format!("{}", recomputed.rmse), format!("{}", written.rmse));
    }

    #[test]
    fn identical_seeds_identical_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let text = "experiment = randomwalk\nsim.duration = 10\nsim.seed = 9\n";
        let cfg = parse_config(text).unwrap();
        let a = run(&cfg, &dir.path().join("a")).unwrap();
        let b = run(&cfg, &dir.path().join("b")).unwrap();
        let bytes_a = std::fs::read(&a.csv_path).unwrap();
        let bytes_b = std::fs::read(&b.csv_path).unwrap();
        assert_eq!(bytes_a, bytes_b);
    }

    #[test]
    fn linearization_report_contains_partials() {
        let report = linearization_report(&AnalyzeConfig::default());
        assert!(report.contains("dxy_dtheta"));
        assert!(report.contains("dz_dpsidot"));
        assert!(report.contains("max relative error"));
    }

    #[test]
    fn calibration_report_klift() {
        let cfg = parse_config("").unwrap();
        let report = calibration_report(&cfg).unwrap();
        let line = report
            .lines()
            .find(|l| l.trim_start().starts_with("k_lift = "))
            .expect("report lists k_lift");
        let value: f64 = line.split('=').nth(1).unwrap().trim().parse().unwrap();
        assert!((value - 4.905e-4).abs() < 1e-9, "calibrated {value}");
    }
}
