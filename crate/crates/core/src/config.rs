//! Flat `section.key = value` run configuration.
//!
//! One assignment per line, `#` starts a comment, unknown and duplicate keys
//! are rejected with their line number, and every missing key falls back to
//! the documented default. An empty file is a valid hover run on the default
//! vehicle.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use nalgebra::Vector2;
use thiserror::Error;

use crate::analysis::OperatingPoint;
use crate::behavior::{Environment, RandomWalkConfig};
use crate::control::Gains;
use crate::sim::Model;
use crate::trajectory::{Direction, LissajousParams, TriangleParams};
use crate::types::{ParamError, Vec3, VehicleParams};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("key `{key}`: {msg}")]
    Invariant { key: String, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl ConfigError {
    fn invariant(section: &str, err: ParamError) -> Self {
        ConfigError::Invariant {
            key: format!("{section}.{}", err.key),
            msg: err.reason,
        }
    }
}

/// Which experiment a `run` invocation executes.
#[derive(Debug, Clone)]
pub enum Experiment {
    Hover { start: Vec3, goal: Vec3 },
    Triangle(TriangleParams),
    Lissajous {
        params: LissajousParams,
        /// When set, `speed_scale` is calibrated to this average path speed
        /// before the run.
        target_speed: Option<f64>,
    },
    RandomWalk {
        env: Environment,
        cfg: RandomWalkConfig,
        start: Vector2<f64>,
    },
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Hover { .. } => "hover",
            Experiment::Triangle(_) => "triangle",
            Experiment::Lissajous { .. } => "lissajous",
            Experiment::RandomWalk { .. } => "randomwalk",
        }
    }
}

/// Simulation settings prior to duration resolution (experiments without an
/// explicit `sim.duration` get their natural length: one lap, one period,
/// 60 s of hover, 600 s of random walk).
#[derive(Debug, Clone, Copy)]
pub struct SimSettings {
    pub dt: f64,
    pub duration: Option<f64>,
    pub model: Model,
    pub seed: u64,
    pub log_stride: usize,
    pub control_stride: usize,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            duration: None,
            model: Model::Simplified,
            seed: 0,
            log_stride: 10,
            control_stride: 1,
        }
    }
}

/// Exit-gating monitors. Lyapunov values are always logged; these flags make
/// them pass/fail criteria for the process exit status.
#[derive(Debug, Clone, Copy)]
pub struct MonitorConfig {
    /// Require the height Lyapunov value to be non-increasing (within
    /// `vz_tol`) across consecutive logged samples.
    pub lyapunov_z: bool,
    pub vz_tol: f64,
    /// Require the planar Lyapunov ultimate bound (trailing 20%) to be below
    /// the initial value.
    pub lyapunov_xy: bool,
}

impl Default for MonitorConfig {
    fn default() -> Self {
        Self {
            lyapunov_z: false,
            vz_tol: 1e-6,
            lyapunov_xy: false,
        }
    }
}

/// Operating point and step for `analyze --linearize`.
#[derive(Debug, Clone, Copy)]
pub struct AnalyzeConfig {
    pub op: OperatingPoint,
    pub fd_step: f64,
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        Self {
            op: OperatingPoint {
                theta_xy: 0.3,
                psi: 0.2,
                v_xy: 0.5,
                psi_dot: 10.0,
                force_mag: 1.0,
                drag_coeff: 0.2,
                lift_coeff: 0.01,
            },
            fd_step: 1e-6,
        }
    }
}

/// What `calibrate` solves for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalibrateKind {
    /// Lift coefficient from a fixed spin rate (bisection on steady-state
    /// vertical acceleration).
    KLift,
    /// Lissajous `speed_scale` from a target average path speed.
    Speed,
}

#[derive(Debug, Clone, Copy)]
pub struct CalibrateConfig {
    pub kind: CalibrateKind,
    pub omega: f64,
    pub k_lo: f64,
    pub k_hi: f64,
    pub k_tol: f64,
    pub target_speed: f64,
}

impl Default for CalibrateConfig {
    fn default() -> Self {
        Self {
            kind: CalibrateKind::KLift,
            omega: 10.0,
            k_lo: 1e-5,
            k_hi: 1e-2,
            k_tol: 1e-13,
            target_speed: 0.13,
        }
    }
}

/// Fully parsed run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub vehicle: VehicleParams,
    pub gains: Gains,
    pub sim: SimSettings,
    pub experiment: Experiment,
    pub monitors: MonitorConfig,
    pub analyze: AnalyzeConfig,
    pub calibrate: CalibrateConfig,
    pub output: Option<PathBuf>,
}

struct KeyBag {
    entries: HashMap<String, (usize, String)>,
}

impl KeyBag {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let stripped = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let stripped = stripped.trim();
            if stripped.is_empty() {
                continue;
            }
            let Some((key, value)) = stripped.split_once('=') else {
                return Err(ConfigError::Parse {
                    line,
                    msg: format!("expected `key = value`, got `{stripped}`"),
                });
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() {
                return Err(ConfigError::Parse {
                    line,
                    msg: "empty key".into(),
                });
            }
            if entries.insert(key.clone(), (line, value)).is_some() {
                return Err(ConfigError::DuplicateKey { line, key });
            }
        }
        Ok(Self { entries })
    }

    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.entries.remove(key)
    }

    fn take_f64(&mut self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => v.parse::<f64>().map(Some).map_err(|_| ConfigError::Parse {
                line,
                msg: format!("`{key}` expects a number, got `{v}`"),
            }),
        }
    }

    fn take_u64(&mut self, key: &str) -> Result<Option<u64>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => v.parse::<u64>().map(Some).map_err(|_| ConfigError::Parse {
                line,
                msg: format!("`{key}` expects a non-negative integer, got `{v}`"),
            }),
        }
    }

    fn take_usize(&mut self, key: &str) -> Result<Option<usize>, ConfigError> {
        Ok(self.take_u64(key)?.map(|v| v as usize))
    }

    fn take_bool(&mut self, key: &str) -> Result<Option<bool>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => match v.as_str() {
                "true" | "1" | "yes" => Ok(Some(true)),
                "false" | "0" | "no" => Ok(Some(false)),
                _ => Err(ConfigError::Parse {
                    line,
                    msg: format!("`{key}` expects true/false, got `{v}`"),
                }),
            },
        }
    }

    fn take_string(&mut self, key: &str) -> Option<String> {
        self.take(key).map(|(_, v)| v)
    }

    fn take_floats(&mut self, key: &str, n: usize) -> Result<Option<Vec<f64>>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => {
                let parts: Result<Vec<f64>, _> =
                    v.split(',').map(|p| p.trim().parse::<f64>()).collect();
                match parts {
                    Ok(parts) if parts.len() == n => Ok(Some(parts)),
                    _ => Err(ConfigError::Parse {
                        line,
                        msg: format!("`{key}` expects {n} comma-separated numbers, got `{v}`"),
                    }),
                }
            }
        }
    }

    fn take_vec3(&mut self, key: &str) -> Result<Option<Vec3>, ConfigError> {
        Ok(self
            .take_floats(key, 3)?
            .map(|p| Vec3::new(p[0], p[1], p[2])))
    }

    /// Collect `env.wall.N` entries, ordered by N.
    fn take_walls(&mut self) -> Result<Vec<(Vector2<f64>, Vector2<f64>)>, ConfigError> {
        let mut keys: Vec<(u64, String)> = self
            .entries
            .keys()
            .filter_map(|k| {
                k.strip_prefix("env.wall.")
                    .and_then(|suffix| suffix.parse::<u64>().ok())
                    .map(|n| (n, k.clone()))
            })
            .collect();
        keys.sort();
        let mut walls = Vec::with_capacity(keys.len());
        for (_, key) in keys {
            let p = self.take_floats(&key, 4)?.expect("key exists");
            walls.push((Vector2::new(p[0], p[1]), Vector2::new(p[2], p[3])));
        }
        Ok(walls)
    }

    fn finish(self) -> Result<(), ConfigError> {
        if let Some((key, (line, _))) = self
            .entries
            .into_iter()
            .min_by_key(|(_, (line, _))| *line)
        {
            return Err(ConfigError::UnknownKey { line, key });
        }
        Ok(())
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut bag = KeyBag::parse(text)?;

    // vehicle
    let d = VehicleParams::defaults();
    let inertia = Vec3::new(
        bag.take_f64("vehicle.i_x")?.unwrap_or(d.inertia.x),
        bag.take_f64("vehicle.i_y")?.unwrap_or(d.inertia.y),
        bag.take_f64("vehicle.i_z")?.unwrap_or(d.inertia.z),
    );
    let vehicle = VehicleParams {
        m: bag.take_f64("vehicle.m")?.unwrap_or(d.m),
        g: bag.take_f64("vehicle.g")?.unwrap_or(d.g),
        f_b: bag.take_f64("vehicle.f_b")?.unwrap_or(d.f_b),
        l_m: bag.take_f64("vehicle.l_m")?.unwrap_or(d.l_m),
        k_lift: bag.take_f64("vehicle.k_lift")?.unwrap_or(d.k_lift),
        d_x: bag.take_f64("vehicle.d_x")?.unwrap_or(d.d_x),
        d_y: bag.take_f64("vehicle.d_y")?.unwrap_or(d.d_y),
        d_z: bag.take_f64("vehicle.d_z")?.unwrap_or(d.d_z),
        d_w: bag.take_f64("vehicle.d_w")?.unwrap_or(d.d_w),
        inertia,
        p_b: bag.take_vec3("vehicle.p_b")?.unwrap_or(d.p_b),
        p_g: bag.take_vec3("vehicle.p_g")?.unwrap_or(d.p_g),
        f_max: bag.take_f64("vehicle.f_max")?.unwrap_or(d.f_max),
    }
    .validated()
    .map_err(|e| ConfigError::invariant("vehicle", e))?;

    // gains
    let gd = Gains::default();
    let gains = Gains {
        k_p: bag.take_f64("gains.k_p")?.unwrap_or(gd.k_p),
        k_d: bag.take_f64("gains.k_d")?.unwrap_or(gd.k_d),
        k: bag.take_f64("gains.k")?.unwrap_or(gd.k),
        tau: bag.take_f64("gains.tau")?.unwrap_or(gd.tau),
        hover_deadband: bag
            .take_f64("gains.hover_deadband")?
            .unwrap_or(gd.hover_deadband),
        eps_goal: bag.take_f64("gains.eps_goal")?.unwrap_or(gd.eps_goal),
    }
    .validated(&vehicle)
    .map_err(|e| ConfigError::invariant("gains", e))?;

    // sim
    let sd = SimSettings::default();
    let model = match bag.take("sim.model") {
        None => sd.model,
        Some((line, v)) => match v.as_str() {
            "full" => Model::Full,
            "simplified" => Model::Simplified,
            _ => {
                return Err(ConfigError::Parse {
                    line,
                    msg: format!("`sim.model` expects full|simplified, got `{v}`"),
                })
            }
        },
    };
    let sim = SimSettings {
        dt: bag.take_f64("sim.dt")?.unwrap_or(sd.dt),
        duration: bag.take_f64("sim.duration")?,
        model,
        seed: bag.take_u64("sim.seed")?.unwrap_or(sd.seed),
        log_stride: bag.take_usize("sim.log_stride")?.unwrap_or(sd.log_stride),
        control_stride: bag
            .take_usize("sim.control_stride")?
            .unwrap_or(sd.control_stride),
    };
    if !(sim.dt.is_finite() && sim.dt > 0.0) {
        return Err(ConfigError::Invariant {
            key: "sim.dt".into(),
            msg: format!("must be > 0, got {}", sim.dt),
        });
    }

    // hover section
    let hover_goal = Vec3::new(
        bag.take_f64("hover.goal_x")?.unwrap_or(0.0),
        bag.take_f64("hover.goal_y")?.unwrap_or(0.0),
        bag.take_f64("hover.goal_z")?.unwrap_or(1.0),
    );
    let hover_start = Vec3::new(
        bag.take_f64("hover.start_x")?.unwrap_or(hover_goal.x),
        bag.take_f64("hover.start_y")?.unwrap_or(hover_goal.y),
        bag.take_f64("hover.start_z")?.unwrap_or(hover_goal.z),
    );

    // triangle section
    let t_side = bag.take_f64("triangle.side")?.unwrap_or(2.0);
    let t_center = Vec3::new(
        bag.take_f64("triangle.center_x")?.unwrap_or(0.0),
        bag.take_f64("triangle.center_y")?.unwrap_or(0.0),
        bag.take_f64("triangle.z")?.unwrap_or(1.0),
    );
    let t_speed = bag.take_f64("triangle.speed")?.unwrap_or(0.10);
    let t_direction = match bag.take("triangle.direction") {
        None => Direction::Ccw,
        Some((line, v)) => match v.as_str() {
            "cw" => Direction::Cw,
            "ccw" => Direction::Ccw,
            _ => {
                return Err(ConfigError::Parse {
                    line,
                    msg: format!("`triangle.direction` expects cw|ccw, got `{v}`"),
                })
            }
        },
    };
    let mut triangle =
        TriangleParams::equilateral(t_side, t_center, t_speed, t_direction);
    for (i, key) in ["triangle.v1", "triangle.v2", "triangle.v3"].iter().enumerate() {
        if let Some(v) = bag.take_vec3(key)? {
            triangle.vertices[i] = v;
        }
    }
    let triangle = triangle
        .validated()
        .map_err(|e| ConfigError::invariant("triangle", e))?;

    // lissajous section
    let ld = LissajousParams::default();
    let lissajous = LissajousParams {
        amp_x: bag.take_f64("lissajous.amp_x")?.unwrap_or(ld.amp_x),
        amp_y: bag.take_f64("lissajous.amp_y")?.unwrap_or(ld.amp_y),
        freq_x: bag.take_f64("lissajous.freq_x")?.unwrap_or(ld.freq_x),
        freq_y: bag.take_f64("lissajous.freq_y")?.unwrap_or(ld.freq_y),
        phase_x: bag.take_f64("lissajous.phase_x")?.unwrap_or(ld.phase_x),
        phase_y: bag.take_f64("lissajous.phase_y")?.unwrap_or(ld.phase_y),
        z_d: bag.take_f64("lissajous.z")?.unwrap_or(ld.z_d),
        speed_scale: bag
            .take_f64("lissajous.speed_scale")?
            .unwrap_or(ld.speed_scale),
    }
    .validated()
    .map_err(|e| ConfigError::invariant("lissajous", e))?;
    let target_speed = bag.take_f64("lissajous.target_speed")?;

    // randomwalk section
    let rd = RandomWalkConfig::default();
    let walk_cfg = RandomWalkConfig {
        threshold: bag.take_f64("randomwalk.threshold")?.unwrap_or(rd.threshold),
        speed: bag.take_f64("randomwalk.speed")?.unwrap_or(rd.speed),
        sensor_rate: bag
            .take_f64("randomwalk.sensor_rate")?
            .unwrap_or(rd.sensor_rate),
        max_range: bag.take_f64("randomwalk.max_range")?.unwrap_or(rd.max_range),
        z_d: bag.take_f64("randomwalk.z")?.unwrap_or(rd.z_d),
        lead: bag.take_f64("randomwalk.lead")?.unwrap_or(rd.lead),
    };
    let walk_start = Vector2::new(
        bag.take_f64("randomwalk.start_x")?.unwrap_or(0.0),
        bag.take_f64("randomwalk.start_y")?.unwrap_or(0.0),
    );
    let wall_segments = bag.take_walls()?;
    let env = if wall_segments.is_empty() {
        Environment::rectangle(6.0, 4.0)
    } else {
        Environment::new(&wall_segments).map_err(|e| ConfigError::Invariant {
            key: "env.wall".into(),
            msg: e.to_string(),
        })?
    };

    // monitors
    let md = MonitorConfig::default();
    let monitors = MonitorConfig {
        lyapunov_z: bag.take_bool("monitor.lyapunov_z")?.unwrap_or(md.lyapunov_z),
        vz_tol: bag.take_f64("monitor.vz_tol")?.unwrap_or(md.vz_tol),
        lyapunov_xy: bag
            .take_bool("monitor.lyapunov_xy")?
            .unwrap_or(md.lyapunov_xy),
    };

    // analyze
    let ad = AnalyzeConfig::default();
    let analyze = AnalyzeConfig {
        op: OperatingPoint {
            theta_xy: bag.take_f64("analyze.theta0")?.unwrap_or(ad.op.theta_xy),
            psi: bag.take_f64("analyze.psi0")?.unwrap_or(ad.op.psi),
            v_xy: bag.take_f64("analyze.v0")?.unwrap_or(ad.op.v_xy),
            psi_dot: bag.take_f64("analyze.psidot0")?.unwrap_or(ad.op.psi_dot),
            force_mag: bag.take_f64("analyze.force")?.unwrap_or(ad.op.force_mag),
            drag_coeff: bag.take_f64("analyze.drag")?.unwrap_or(ad.op.drag_coeff),
            lift_coeff: bag.take_f64("analyze.lift")?.unwrap_or(ad.op.lift_coeff),
        },
        fd_step: bag.take_f64("analyze.fd_step")?.unwrap_or(ad.fd_step),
    };

    // calibrate
    let cd = CalibrateConfig::default();
    let kind = match bag.take("calibrate.kind") {
        None => cd.kind,
        Some((line, v)) => match v.as_str() {
            "klift" => CalibrateKind::KLift,
            "speed" => CalibrateKind::Speed,
            _ => {
                return Err(ConfigError::Parse {
                    line,
                    msg: format!("`calibrate.kind` expects klift|speed, got `{v}`"),
                })
            }
        },
    };
    let calibrate = CalibrateConfig {
        kind,
        omega: bag.take_f64("calibrate.omega")?.unwrap_or(cd.omega),
        k_lo: bag.take_f64("calibrate.k_lo")?.unwrap_or(cd.k_lo),
        k_hi: bag.take_f64("calibrate.k_hi")?.unwrap_or(cd.k_hi),
        k_tol: bag.take_f64("calibrate.k_tol")?.unwrap_or(cd.k_tol),
        target_speed: bag
            .take_f64("calibrate.target_speed")?
            .unwrap_or(cd.target_speed),
    };

    // experiment selection
    let experiment = match bag.take("experiment") {
        None => Experiment::Hover {
            start: hover_start,
            goal: hover_goal,
        },
        Some((line, v)) => match v.as_str() {
            "hover" => Experiment::Hover {
                start: hover_start,
                goal: hover_goal,
            },
            "triangle" => Experiment::Triangle(triangle),
            "lissajous" => Experiment::Lissajous {
                params: lissajous,
                target_speed,
            },
            "randomwalk" => Experiment::RandomWalk {
                env,
                cfg: walk_cfg,
                start: walk_start,
            },
            _ => {
                return Err(ConfigError::Parse {
                    line,
                    msg: format!(
                        "`experiment` expects hover|triangle|lissajous|randomwalk, got `{v}`"
                    ),
                })
            }
        },
    };

    let output = bag.take_string("output.path").map(PathBuf::from);

    bag.finish()?;

    Ok(RunConfig {
        vehicle,
        gains,
        sim,
        experiment,
        monitors,
        analyze,
        calibrate,
        output,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn empty_config_is_default_hover() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg.experiment.name(), "hover");
        assert_relative_eq!(cfg.vehicle.m, 0.065, epsilon = 1e-12);
        assert_relative_eq!(cfg.gains.k_p, 0.4, epsilon = 1e-12);
        assert_eq!(cfg.sim.model, Model::Simplified);
        assert!(cfg.sim.duration.is_none());
    }

    #[test]
    fn invariant_violation_names_the_key() {
        let err = parse_config("vehicle.f_max = -1\n").unwrap_err();
        match err {
            ConfigError::Invariant { key, .. } => assert_eq!(key, "vehicle.f_max"),
            other => panic!("expected invariant error, got {other}"),
        }
    }

    #[test]
    fn long_wing_variant_selected_by_key() {
        let cfg = parse_config("vehicle.l_m = 0.65\n").unwrap();
        assert_relative_eq!(cfg.vehicle.l_m, 0.65, epsilon = 1e-12);
    }

    #[test]
    fn unknown_key_rejected_with_line() {
        let err = parse_config("vehicle.m = 0.065\nvheicle.f_b = 0.5\n").unwrap_err();
        match err {
            ConfigError::UnknownKey { line, key } => {
                assert_eq!(line, 2);
                assert_eq!(key, "vheicle.f_b");
            }
            other => panic!("expected unknown-key error, got {other}"),
        }
    }

    #[test]
    fn parse_error_reports_line() {
        let err = parse_config("# comment\nvehicle.m 0.065\n").unwrap_err();
        match err {
            ConfigError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn duplicate_key_rejected() {
        let err = parse_config("sim.dt = 0.001\nsim.dt = 0.002\n").unwrap_err();
        assert!(matches!(err, ConfigError::DuplicateKey { line: 2, .. }));
    }

    #[test]
    fn comments_and_whitespace_tolerated() {
        let text = "
            # full-line comment
            experiment = lissajous   # trailing comment
            lissajous.target_speed = 0.13
            sim.seed = 7
        ";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.experiment.name(), "lissajous");
        assert_eq!(cfg.sim.seed, 7);
        match cfg.experiment {
            Experiment::Lissajous { target_speed, .. } => {
                assert_eq!(target_speed, Some(0.13));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn walls_parsed_in_order() {
        let text = "
            experiment = randomwalk
            env.wall.0 = -3,-2, 3,-2
            env.wall.1 =  3,-2, 3, 2
            env.wall.2 =  3, 2,-3, 2
            env.wall.3 = -3, 2,-3,-2
        ";
        let cfg = parse_config(text).unwrap();
        match cfg.experiment {
            Experiment::RandomWalk { env, .. } => {
                assert_eq!(env.walls.len(), 4);
                assert_relative_eq!(env.walls[0].a.x, -3.0, epsilon = 1e-12);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn model_selection() {
        let cfg = parse_config("sim.model = full\n").unwrap();
        assert_eq!(cfg.sim.model, Model::Full);
        assert!(parse_config("sim.model = fancy\n").is_err());
    }

    #[test]
    fn triangle_custom_vertices() {
        let text = "
            experiment = triangle
            triangle.v1 = 0,0,1
            triangle.v2 = 2,0,1
            triangle.v3 = 1,1.5,1
            triangle.speed = 0.2
        ";
        let cfg = parse_config(text).unwrap();
        match cfg.experiment {
            Experiment::Triangle(t) => {
                assert_relative_eq!(t.vertices[1].x, 2.0, epsilon = 1e-12);
                assert_relative_eq!(t.speed, 0.2, epsilon = 1e-12);
            }
            _ => unreachable!(),
        }
    }
}
