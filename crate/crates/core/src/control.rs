//! Spin-rate height control and the switching (bang-bang) position
//! controller.
//!
//! Height is regulated through the spin rate: a PD law on altitude error
//! picks a setpoint `ω_z*` whose wing lift balances net buoyancy plus the
//! commanded correction, and both motors track that setpoint with a gain
//! plus a drag feed-forward. Planar motion adds a thrust differential `±τ`
//! switched on the half-plane test of the goal angle `β`, which leaves the
//! thrust sum (and therefore the spin dynamics) untouched until saturation.

use crate::analysis;
use crate::sim::{ControlOutput, Controller};
use crate::types::{wrap_angle, world_to_body, ControlInput, ParamError, State, Vec3, VehicleParams};

/// Controller gains and dead-bands.
#[derive(Debug, Clone, Copy)]
pub struct Gains {
    /// Height proportional gain (N/m after division by mass semantics of the
    /// setpoint law).
    pub k_p: f64,
    /// Height derivative gain (N·s/m).
    pub k_d: f64,
    /// Spin-rate tracking gain (N·s/rad).
    pub k: f64,
    /// Bang-bang thrust differential (N).
    pub tau: f64,
    /// Planar distance below which the controller holds pure hover,
    /// suppressing switching chatter near the goal (m).
    pub hover_deadband: f64,
    /// Planar distance below which the goal angle is undefined (m).
    pub eps_goal: f64,
}

impl Default for Gains {
    fn default() -> Self {
        Self {
            k_p: 0.4,
            k_d: 0.6,
            k: 0.02,
            tau: 0.02,
            hover_deadband: 0.05,
            eps_goal: 1e-6,
        }
    }
}

impl Gains {
    /// Check gain invariants against the vehicle's thrust limit.
    pub fn validated(self, params: &VehicleParams) -> Result<Self, ParamError> {
        for (key, v) in [("k_p", self.k_p), ("k_d", self.k_d), ("k", self.k)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ParamError::new(key, format!("must be > 0, got {v}")));
            }
        }
        if !(self.tau.is_finite() && self.tau > 0.0 && self.tau <= params.f_max / 2.0) {
            return Err(ParamError::new(
                "tau",
                format!("must be in (0, f_max/2], got {}", self.tau),
            ));
        }
        for (key, v) in [
            ("hover_deadband", self.hover_deadband),
            ("eps_goal", self.eps_goal),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(ParamError::new(key, format!("must be >= 0, got {v}")));
            }
        }
        Ok(self)
    }
}

/// Reference point handed to the position controller.
#[derive(Debug, Clone, Copy)]
pub struct Reference {
    /// Desired position (m, world frame).
    pub pos: Vec3,
    /// Desired velocity (m/s, world frame).
    pub vel: Vec3,
    /// Desired vertical acceleration (m/s²).
    pub accel_z: f64,
}

impl Reference {
    /// Stationary reference at `pos`.
    pub fn hold(pos: Vec3) -> Self {
        Self {
            pos,
            vel: Vec3::zeros(),
            accel_z: 0.0,
        }
    }
}

/// Spin-rate setpoint with its saturation flag.
#[derive(Debug, Clone, Copy)]
pub struct SpinSetpoint {
    pub omega: f64,
    /// The PD law asked for less lift than zero spin provides; the setpoint
    /// was clamped to 0 and the vehicle descends at its passive sink rate.
    pub descent_saturated: bool,
}

/// Spin-rate setpoint for the height loop:
/// `ω*² = (m·g - f_b + K_p·e_z + K_d·ė_z + z̈_d) / k_lift`, clamped at zero.
pub fn omega_z_setpoint(
    z: f64,
    dz: f64,
    reference: &Reference,
    params: &VehicleParams,
    gains: &Gains,
) -> SpinSetpoint {
    let numerator = -params.f_b
        + params.m * params.g
        + gains.k_p * (reference.pos.z - z)
        + gains.k_d * (reference.vel.z - dz)
        + reference.accel_z;
    let squared = numerator / params.k_lift;
    if squared < 0.0 {
        SpinSetpoint {
            omega: 0.0,
            descent_saturated: true,
        }
    } else {
        SpinSetpoint {
            omega: squared.sqrt(),
            descent_saturated: false,
        }
    }
}

/// Equal-thrust input tracking a spin setpoint:
/// `f_i = k·(ω* - ω_z) + d_w·ω_z²/(2·l_m)`, clamped to `[0, f_max]`.
/// The second term feeds forward the rotational drag at the current spin.
pub fn height_control_input(
    omega_z: f64,
    omega_z_star: f64,
    params: &VehicleParams,
    gains: &Gains,
) -> ControlInput {
    let per_motor =
        gains.k * (omega_z_star - omega_z) + params.d_w * omega_z * omega_z / (2.0 * params.l_m);
    ControlInput::new(per_motor, per_motor).saturate(params.f_max)
}

/// Goal angle β: the angle between the body y-axis and the goal vector,
/// both projected on the world xy-plane, in `(-pi, pi]`. Zero iff the goal
/// lies along body +y. `None` when the projected goal is within `eps_goal`.
pub fn compute_beta(state: &State, goal: Vec3, eps_goal: f64) -> Option<f64> {
    let to_goal = goal - state.pos;
    if to_goal.xy().norm() <= eps_goal {
        return None;
    }
    let g_body = world_to_body(&state.att, to_goal);
    Some(wrap_angle(g_body.x.atan2(g_body.y)))
}

/// Half-plane switching function: `+1` iff `-pi/2 < β <= pi/2`, else `-1`.
pub fn bang_bang_sign(beta: f64) -> f64 {
    if beta > -std::f64::consts::FRAC_PI_2 && beta <= std::f64::consts::FRAC_PI_2 {
        1.0
    } else {
        -1.0
    }
}

/// Per-step internals of [`position_control`], for logging and tests.
#[derive(Debug, Clone, Copy)]
pub struct ControlTelemetry {
    pub beta: Option<f64>,
    pub omega_z_setpoint: f64,
    pub descent_saturated: bool,
    /// Height-loop input before the bang-bang differential.
    pub u_height: ControlInput,
}

/// Full position controller: height loop plus bang-bang planar differential.
///
/// The differential is applied as `f1 += τ·g(β)`, `f2 -= τ·g(β)`, so the
/// resulting planar force `(f1 - f2)` along body +y points into the goal
/// half-plane; within `hover_deadband` of the goal the differential is
/// dropped and the height input passes through unchanged.
pub fn position_control_detailed(
    state: &State,
    reference: &Reference,
    params: &VehicleParams,
    gains: &Gains,
) -> (ControlInput, ControlTelemetry) {
    let sp = omega_z_setpoint(state.pos.z, state.vel.z, reference, params, gains);
    let u_height = height_control_input(state.omega.z, sp.omega, params, gains);

    let e_xy = (reference.pos - state.pos).xy().norm();
    let beta = if e_xy <= gains.hover_deadband.max(gains.eps_goal) {
        None
    } else {
        compute_beta(state, reference.pos, gains.eps_goal)
    };

    let u = match beta {
        None => u_height,
        Some(b) => {
            let g = bang_bang_sign(b);
            ControlInput::new(u_height.f1 + gains.tau * g, u_height.f2 - gains.tau * g)
                .saturate(params.f_max)
        }
    };

    (
        u,
        ControlTelemetry {
            beta,
            omega_z_setpoint: sp.omega,
            descent_saturated: sp.descent_saturated,
            u_height,
        },
    )
}

/// See [`position_control_detailed`]; this is the bare control-law surface.
pub fn position_control(
    state: &State,
    reference: &Reference,
    params: &VehicleParams,
    gains: &Gains,
) -> ControlInput {
    position_control_detailed(state, reference, params, gains).0
}

/// Position controller following a time-varying reference.
pub struct TrackingController<F: FnMut(f64) -> Reference> {
    pub gains: Gains,
    reference: F,
}

impl<F: FnMut(f64) -> Reference> TrackingController<F> {
    pub fn new(gains: Gains, reference: F) -> Self {
        Self { gains, reference }
    }
}

impl<F: FnMut(f64) -> Reference> Controller for TrackingController<F> {
    fn control(&mut self, t: f64, state: &State, params: &VehicleParams) -> ControlOutput {
        let reference = (self.reference)(t);
        let (u, telemetry) = position_control_detailed(state, &reference, params, &self.gains);
        let e_z = reference.pos.z - state.pos.z;
        let de_z = reference.vel.z - state.vel.z;
        let v_z = analysis::lyapunov_z(e_z, de_z, params, &self.gains).v;
        ControlOutput {
            u,
            reference: Some(reference),
            beta: telemetry.beta,
            omega_z_setpoint: Some(telemetry.omega_z_setpoint),
            lyapunov_z: Some(v_z),
        }
    }
}

/// Hover controller: position control toward a fixed goal.
pub fn hover_controller(goal: Vec3, gains: Gains) -> TrackingController<impl FnMut(f64) -> Reference> {
    TrackingController::new(gains, move |_t| Reference::hold(goal))
}

/// Height-loop-only controller tracking a fixed spin setpoint; no planar
/// differential. Used for spin-convergence studies.
pub struct ConstantSpinController {
    pub omega_star: f64,
    pub gains: Gains,
}

impl Controller for ConstantSpinController {
    fn control(&mut self, _t: f64, state: &State, params: &VehicleParams) -> ControlOutput {
        let u = height_control_input(state.omega.z, self.omega_star, params, &self.gains);
        ControlOutput {
            u,
            reference: None,
            beta: None,
            omega_z_setpoint: Some(self.omega_star),
            lyapunov_z: None,
        }
    }
}
