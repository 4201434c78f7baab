//! Fixed-step RK4 simulation of either dynamics model under a pluggable
//! controller, producing a complete CSV-ready log.
//!
//! Runs are strictly deterministic: a fixed step size, a controller queried
//! once per step (zero-order hold), and thrust saturation applied by the
//! simulator before the dynamics ever see an input.

use std::io::Write;

use nalgebra::UnitQuaternion;
use thiserror::Error;

use crate::analysis;
use crate::control::Reference;
use crate::dynamics::{full_derivative, simplified_derivative, AttitudeRate, DynError, StateDot};
use crate::types::{Attitude, ControlInput, State, Vec3, VehicleParams};

/// Which dynamics model to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Full,
    Simplified,
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Model::Full => write!(f, "full"),
            Model::Simplified => write!(f, "simplified"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SimConfig {
    /// Integration step (s).
    pub dt: f64,
    /// Total simulated time (s).
    pub duration: f64,
    pub model: Model,
    /// Seed for stochastic behaviors (exploration policies).
    pub seed: u64,
    /// Steps per logged row.
    pub log_stride: usize,
    /// Steps per controller query; 1 runs the controller every step.
    pub control_stride: usize,
}

impl SimConfig {
    pub fn new(model: Model, duration: f64) -> Self {
        Self {
            dt: 1e-3,
            duration,
            model,
            seed: 0,
            log_stride: 10,
            control_stride: 1,
        }
    }

    fn validate(&self) -> Result<(), SimError> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(SimError::Config(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.duration.is_finite() && self.duration >= self.dt) {
            return Err(SimError::Config(format!(
                "duration must be >= dt, got {}",
                self.duration
            )));
        }
        if self.log_stride == 0 {
            return Err(SimError::Config("log_stride must be >= 1".into()));
        }
        if self.control_stride == 0 {
            return Err(SimError::Config("control_stride must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    Config(String),
    #[error(transparent)]
    Dynamics(#[from] DynError),
    #[error("integration produced a non-finite state (blow-up)")]
    NonFinite,
}

/// What the controller hands back each step: the input plus optional
/// telemetry that ends up in the log.
#[derive(Debug, Clone, Copy)]
pub struct ControlOutput {
    pub u: ControlInput,
    pub reference: Option<Reference>,
    pub beta: Option<f64>,
    pub omega_z_setpoint: Option<f64>,
    pub lyapunov_z: Option<f64>,
}

impl ControlOutput {
    /// Input only, no telemetry.
    pub fn open_loop(u: ControlInput) -> Self {
        Self {
            u,
            reference: None,
            beta: None,
            omega_z_setpoint: None,
            lyapunov_z: None,
        }
    }
}

/// Control policy driven by the simulator, queried once per
/// `control_stride` steps with the current state and time.
pub trait Controller {
    fn control(&mut self, t: f64, state: &State, params: &VehicleParams) -> ControlOutput;
}

/// Fixed-input controller, useful for open-loop runs and integrator tests.
pub struct ConstantInput(pub ControlInput);

impl Controller for ConstantInput {
    fn control(&mut self, _t: f64, _state: &State, _params: &VehicleParams) -> ControlOutput {
        ControlOutput::open_loop(self.0)
    }
}

/// One logged sample. Fields without a meaningful value for the current run
/// (no reference, monitor disabled) hold NaN.
#[derive(Debug, Clone, Copy)]
pub struct LogRow {
    pub t: f64,
    pub pos: Vec3,
    pub vel: Vec3,
    pub roll: f64,
    pub pitch: f64,
    pub yaw: f64,
    pub omega: Vec3,
    pub f1: f64,
    pub f2: f64,
    pub ref_pos: Vec3,
    pub beta: f64,
    pub omega_z_setpoint: f64,
    pub tracking_error: f64,
    pub lyapunov_z: f64,
    pub lyapunov_xy: f64,
}

/// CSV column order; fixed, matches [`LogRow`] field order.
pub const CSV_HEADER: &str = "t,pos_x,pos_y,pos_z,vel_x,vel_y,vel_z,roll,pitch,yaw,\
omega_x,omega_y,omega_z,f1,f2,ref_x,ref_y,ref_z,beta,omega_z_setpoint,\
tracking_error,lyapunov_z,lyapunov_xy";

impl LogRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.t,
            self.pos.x,
            self.pos.y,
            self.pos.z,
            self.vel.x,
            self.vel.y,
            self.vel.z,
            self.roll,
            self.pitch,
            self.yaw,
            self.omega.x,
            self.omega.y,
            self.omega.z,
            self.f1,
            self.f2,
            self.ref_pos.x,
            self.ref_pos.y,
            self.ref_pos.z,
            self.beta,
            self.omega_z_setpoint,
            self.tracking_error,
            self.lyapunov_z,
            self.lyapunov_xy,
        )
    }
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    Completed,
    /// The integrator produced a non-finite state; the log holds everything
    /// up to the failing step.
    Diverged { step: usize, t: f64 },
}

#[derive(Debug, Clone)]
pub struct SimLog {
    pub rows: Vec<LogRow>,
    pub outcome: Outcome,
}

impl SimLog {
    pub fn completed(&self) -> bool {
        self.outcome == Outcome::Completed
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for row in &self.rows {
            writeln!(w, "{}", row.to_csv())?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }

    /// Tracking errors of all rows that carry a reference.
    pub fn tracking_errors(&self) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.tracking_error)
            .filter(|e| e.is_finite())
            .collect()
    }
}

fn advanced(state: &State, dot: &StateDot, h: f64) -> State {
    let att = match (state.att, dot.datt) {
        (Attitude::Planar(psi), AttitudeRate::Planar(dpsi)) => Attitude::Planar(psi + dpsi * h),
        (att, AttitudeRate::Full(dq)) => {
            let q = att.quaternion();
            Attitude::Full(UnitQuaternion::new_normalize(q.into_inner() + dq * h))
        }
        (Attitude::Full(_), AttitudeRate::Planar(_)) => {
            unreachable!("planar attitude rate applied to a full attitude")
        }
    };
    State {
        pos: state.pos + dot.dpos * h,
        vel: state.vel + dot.dvel * h,
        att,
        omega: state.omega + dot.domega * h,
    }
}

fn weighted_dot(k1: &StateDot, k2: &StateDot, k3: &StateDot, k4: &StateDot) -> StateDot {
    let datt = match (k1.datt, k2.datt, k3.datt, k4.datt) {
        (
            AttitudeRate::Planar(a),
            AttitudeRate::Planar(b),
            AttitudeRate::Planar(c),
            AttitudeRate::Planar(d),
        ) => AttitudeRate::Planar((a + 2.0 * b + 2.0 * c + d) / 6.0),
        (
            AttitudeRate::Full(a),
            AttitudeRate::Full(b),
            AttitudeRate::Full(c),
            AttitudeRate::Full(d),
        ) => AttitudeRate::Full((a + b * 2.0 + c * 2.0 + d) / 6.0),
        _ => unreachable!("mixed attitude-rate variants within one step"),
    };
    StateDot {
        dpos: (k1.dpos + 2.0 * k2.dpos + 2.0 * k3.dpos + k4.dpos) / 6.0,
        dvel: (k1.dvel + 2.0 * k2.dvel + 2.0 * k3.dvel + k4.dvel) / 6.0,
        datt,
        domega: (k1.domega + 2.0 * k2.domega + 2.0 * k3.domega + k4.domega) / 6.0,
    }
}

fn derivative(state: &State, u: ControlInput, model: Model, params: &VehicleParams) -> Result<StateDot, SimError> {
    match model {
        Model::Full => Ok(full_derivative(state, u, params).0),
        Model::Simplified => Ok(simplified_derivative(state, u, params)?),
    }
}

/// One classical 4th-order Runge-Kutta step with the input held constant.
/// The attitude is renormalized after the step; the simplified model keeps
/// roll = pitch = 0 exactly by construction.
pub fn step_rk4(
    state: &State,
    u: ControlInput,
    dt: f64,
    model: Model,
    params: &VehicleParams,
) -> Result<State, SimError> {
    let k1 = derivative(state, u, model, params)?;
    let s2 = advanced(state, &k1, 0.5 * dt);
    let k2 = derivative(&s2, u, model, params)?;
    let s3 = advanced(state, &k2, 0.5 * dt);
    let k3 = derivative(&s3, u, model, params)?;
    let s4 = advanced(state, &k3, dt);
    let k4 = derivative(&s4, u, model, params)?;
    let next = advanced(state, &weighted_dot(&k1, &k2, &k3, &k4), dt);
    if !next.is_finite() {
        return Err(SimError::NonFinite);
    }
    Ok(next)
}

fn make_row(t: f64, state: &State, out: &ControlOutput) -> LogRow {
    let nan = f64::NAN;
    let (ref_pos, tracking_error, lyapunov_xy) = match out.reference {
        Some(r) => {
            let e = (r.pos - state.pos).norm();
            let e_xy = nalgebra::Vector2::new(r.pos.x - state.pos.x, r.pos.y - state.pos.y);
            let de_xy = nalgebra::Vector2::new(r.vel.x - state.vel.x, r.vel.y - state.vel.y);
            (r.pos, e, analysis::lyapunov_xy(e_xy, de_xy))
        }
        None => (Vec3::new(nan, nan, nan), nan, nan),
    };
    LogRow {
        t,
        pos: state.pos,
        vel: state.vel,
        roll: state.att.roll(),
        pitch: state.att.pitch(),
        yaw: state.att.yaw(),
        omega: state.omega,
        f1: out.u.f1,
        f2: out.u.f2,
        ref_pos,
        beta: out.beta.unwrap_or(nan),
        omega_z_setpoint: out.omega_z_setpoint.unwrap_or(nan),
        tracking_error,
        lyapunov_z: out.lyapunov_z.unwrap_or(nan),
        lyapunov_xy,
    }
}

/// Run a simulation to completion (or blow-up), returning the log.
///
/// Deterministic given the initial state, config (seed included), and
/// controller construction. Saturation to `[0, f_max]` is applied to every
/// controller output before the dynamics are evaluated. On blow-up the log
/// is returned with [`Outcome::Diverged`] and every row logged so far.
pub fn simulate<C: Controller + ?Sized>(
    initial: &State,
    controller: &mut C,
    cfg: &SimConfig,
    params: &VehicleParams,
) -> Result<SimLog, SimError> {
    cfg.validate()?;
    let n_steps = (cfg.duration / cfg.dt).round().max(1.0) as usize;
    let mut rows = Vec::with_capacity(n_steps / cfg.log_stride + 2);
    let mut state = *initial;
    let mut out = ControlOutput::open_loop(ControlInput::ZERO);

    for step in 0..n_steps {
        let t = step as f64 * cfg.dt;
        if step % cfg.control_stride == 0 {
            out = controller.control(t, &state, params);
            out.u = out.u.saturate(params.f_max);
        }
        if step % cfg.log_stride == 0 {
            rows.push(make_row(t, &state, &out));
        }
        match step_rk4(&state, out.u, cfg.dt, cfg.model, params) {
            Ok(next) => state = next,
            Err(SimError::NonFinite) => {
                return Ok(SimLog {
                    rows,
                    outcome: Outcome::Diverged { step, t },
                });
            }
            Err(e) => return Err(e),
        }
    }

    // closing row at the final time
    let t_end = n_steps as f64 * cfg.dt;
    let mut final_out = controller.control(t_end, &state, params);
    final_out.u = final_out.u.saturate(params.f_max);
    rows.push(make_row(t_end, &state, &final_out));

    Ok(SimLog {
        rows,
        outcome: Outcome::Completed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params() -> VehicleParams {
        VehicleParams::defaults().validated().unwrap()
    }

    #[test]
    fn zero_dynamics_leaves_state_unchanged() {
        // neutral buoyancy and no drag: every force is zero at rest
        let p = VehicleParams {
            f_b: 0.065 * 9.81,
            d_x: 0.0,
            d_y: 0.0,
            d_z: 0.0,
            d_w: 0.0,
            ..VehicleParams::defaults()
        };
        let s0 = State::planar(Vec3::new(1.0, 2.0, 3.0), 0.7, 0.0);
        let s1 = step_rk4(&s0, ControlInput::ZERO, 1e-3, Model::Simplified, &p).unwrap();
        assert_eq!(s1.pos, s0.pos);
        assert_eq!(s1.vel, s0.vel);
        assert_eq!(s1.omega, s0.omega);
    }

    #[test]
    fn drag_free_fall_matches_closed_form() {
        let p = VehicleParams {
            d_x: 0.0,
            d_y: 0.0,
            d_z: 0.0,
            ..params()
        };
        let accel = p.net_buoyancy() / p.m;
        let cfg = SimConfig {
            log_stride: 1,
            ..SimConfig::new(Model::Simplified, 1.0)
        };
        let mut ctrl = ConstantInput(ControlInput::ZERO);
        let log = simulate(&State::planar(Vec3::zeros(), 0.0, 0.0), &mut ctrl, &cfg, &p).unwrap();
        assert!(log.completed());
        let last = log.rows.last().unwrap();
        assert_abs_diff_eq!(last.t, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(last.vel.z, accel, epsilon = 1e-9);
        assert_abs_diff_eq!(last.pos.z, 0.5 * accel, epsilon = 1e-9);
    }

    fn endpoint(dt: f64) -> State {
        // smooth full-model trajectory: equal thrusts, small initial roll,
        // all velocity components kept away from sign changes
        let p = params();
        let initial = State {
            pos: Vec3::zeros(),
            vel: Vec3::new(0.3, 0.2, -0.1),
            att: Attitude::from_euler(0.05, 0.0, 0.3),
            omega: Vec3::new(0.0, 0.0, 6.0),
        };
        let u = ControlInput::new(0.04, 0.04);
        let n = (2.0 / dt).round() as usize;
        let mut s = initial;
        for _ in 0..n {
            s = step_rk4(&s, u, dt, Model::Full, &p).unwrap();
        }
        s
    }

    fn state_distance(a: &State, b: &State) -> f64 {
        let dq = a.att.quaternion().angle_to(&b.att.quaternion());
        (a.pos - b.pos).norm() + (a.vel - b.vel).norm() + (a.omega - b.omega).norm() + dq
    }

    #[test]
    fn rk4_self_convergence_order() {
        let s1 = endpoint(2e-3);
        let s2 = endpoint(1e-3);
        let s3 = endpoint(5e-4);
        let e1 = state_distance(&s1, &s2);
        let e2 = state_distance(&s2, &s3);
        let order = (e1 / e2).log2();
        assert!(
            order >= 3.9,
            "observed self-convergence order {order:.3} (e1 = {e1:.3e}, e2 = {e2:.3e})"
        );
    }

    #[test]
    fn simplified_run_keeps_roll_pitch_exactly_zero() {
        let p = params();
        let cfg = SimConfig {
            log_stride: 1,
            ..SimConfig::new(Model::Simplified, 2.0)
        };
        let mut ctrl = ConstantInput(ControlInput::new(0.05, 0.02));
        let s0 = State::planar(Vec3::zeros(), 0.0, 5.0);
        let log = simulate(&s0, &mut ctrl, &cfg, &p).unwrap();
        assert!(log.completed());
        for row in &log.rows {
            assert_eq!(row.roll, 0.0);
            assert_eq!(row.pitch, 0.0);
        }
    }

    #[test]
    fn identical_runs_produce_identical_csv() {
        let p = params();
        let cfg = SimConfig::new(Model::Simplified, 3.0);
        let s0 = State::planar(Vec3::zeros(), 0.0, 8.0);
        let run = |_| {
            let mut ctrl = ConstantInput(ControlInput::new(0.03, 0.05));
            simulate(&s0, &mut ctrl, &cfg, &p).unwrap().to_csv_string()
        };
        assert_eq!(run(0), run(1));
    }

    #[test]
    fn log_time_strictly_increasing() {
        let p = params();
        let cfg = SimConfig {
            log_stride: 7,
            ..SimConfig::new(Model::Simplified, 0.5)
        };
        let mut ctrl = ConstantInput(ControlInput::ZERO);
        let log = simulate(&State::planar(Vec3::zeros(), 0.0, 0.0), &mut ctrl, &cfg, &p).unwrap();
        for w in log.rows.windows(2) {
            assert!(w[1].t > w[0].t);
        }
    }

    #[test]
    fn blow_up_reports_step_and_keeps_partial_log() {
        // astronomically large thrust bound + huge gain-free input drives the
        // state non-finite within a few steps once dt is absurdly large
        let p = VehicleParams {
            f_max: f64::MAX,
            ..params()
        };
        let cfg = SimConfig {
            dt: 1e3,
            duration: 1e6,
            log_stride: 1,
            ..SimConfig::new(Model::Simplified, 1e6)
        };
        let mut ctrl = ConstantInput(ControlInput::new(1e300, 0.0));
        let log = simulate(&State::planar(Vec3::zeros(), 0.0, 0.0), &mut ctrl, &cfg, &p).unwrap();
        match log.outcome {
            Outcome::Diverged { step, .. } => assert!(step < 10),
            Outcome::Completed => panic!("expected divergence"),
        }
        assert!(!log.rows.is_empty());
    }

    #[test]
    fn config_validation() {
        let p = params();
        let mut ctrl = ConstantInput(ControlInput::ZERO);
        let bad = SimConfig {
            dt: 0.0,
            ..SimConfig::new(Model::Simplified, 1.0)
        };
        let err = simulate(&State::planar(Vec3::zeros(), 0.0, 0.0), &mut ctrl, &bad, &p).unwrap_err();
        assert!(matches!(err, SimError::Config(_)));
    }
}
