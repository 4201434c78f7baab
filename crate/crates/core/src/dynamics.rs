//! Forces, torques, and state derivatives for both vehicle models.
//!
//! The full model treats the vehicle as a free rigid body: Newton's equation
//! sums motor thrust, buoyancy/gravity, spin lift, and quadratic air drag;
//! the Euler equation sums motor torque, the buoyancy couple, and rotational
//! drag with the gyroscopic term retained. The simplified model assumes the
//! buoyancy couple keeps the vehicle horizontal, reducing attitude to yaw
//! alone and angular dynamics to the spin axis.
//!
//! Drag is applied in the world frame on world velocity in both models, and
//! rotational drag is sign-aware (`-d_w·ω|ω|`) so either spin direction is
//! damped.

use nalgebra::Quaternion;
use thiserror::Error;

use crate::types::{rot_z, Attitude, ControlInput, State, Vec3, VehicleParams};

/// Contract violations of the derivative functions.
#[derive(Debug, Error, PartialEq)]
pub enum DynError {
    #[error("simplified model requires a planar state (scalar-yaw attitude, omega = [0, 0, w_z])")]
    NotPlanar,
}

/// Attitude rate matching the two [`Attitude`] variants.
#[derive(Debug, Clone, Copy)]
pub enum AttitudeRate {
    /// Quaternion derivative (not normalized).
    Full(Quaternion<f64>),
    /// Yaw rate (rad/s).
    Planar(f64),
}

/// Time derivative of [`State`].
#[derive(Debug, Clone, Copy)]
pub struct StateDot {
    pub dpos: Vec3,
    pub dvel: Vec3,
    pub datt: AttitudeRate,
    pub domega: Vec3,
}

/// Per-mechanism force/torque decomposition of one full-model derivative
/// evaluation. Forces are world-frame, torques body-frame; the four forces
/// sum to `m · dvel`.
#[derive(Debug, Clone, Copy)]
pub struct ForceBreakdown {
    pub f_m: Vec3,
    pub f_bg: Vec3,
    pub f_l: Vec3,
    pub f_d: Vec3,
    pub tau_m: Vec3,
    pub tau_bg: Vec3,
    pub tau_d: Vec3,
}

/// Net motor force in the body frame: motor 1 pushes along +y, motor 2
/// along -y, so the resultant is `[0, f1 - f2, 0]`.
pub fn motor_force_body(u: ControlInput) -> Vec3 {
    Vec3::new(0.0, u.f1 - u.f2, 0.0)
}

/// Net motor torque in the body frame. Both motors sit at the axle tips
/// (`[±l_m, 0, 0]`) pushing in opposite y-directions, so their torques add
/// about body z: `[0, 0, l_m·(f1 + f2)]`.
pub fn motor_torque_body(u: ControlInput, l_m: f64) -> Vec3 {
    Vec3::new(0.0, 0.0, l_m * (u.f1 + u.f2))
}

/// Wing lift from the spinning motion, body frame: `[0, 0, k_lift·ω_z²]`.
/// Even in `omega_z`, so either spin direction lifts.
pub fn lift_force_body(k_lift: f64, omega_z: f64) -> Vec3 {
    Vec3::new(0.0, 0.0, k_lift * omega_z * omega_z)
}

/// Quadratic air drag on world-frame velocity, component-wise
/// `-d_i · v_i · |v_i|`; always opposes motion.
pub fn drag_force_world(params: &VehicleParams, vel: Vec3) -> Vec3 {
    Vec3::new(
        -params.d_x * vel.x * vel.x.abs(),
        -params.d_y * vel.y * vel.y.abs(),
        -params.d_z * vel.z * vel.z.abs(),
    )
}

/// Combined buoyancy and gravity, world frame: `[0, 0, f_b - m·g]`.
pub fn buoyancy_gravity_force_world(params: &VehicleParams) -> Vec3 {
    Vec3::new(0.0, 0.0, params.net_buoyancy())
}

/// Torque of the buoyancy/gravity pair about the body origin:
/// `p_b × (R_wb·[0,0,f_b]) + p_g × (R_wb·[0,0,-m·g])`.
///
/// With the pressure center above and the mass center below the origin this
/// is a restoring couple that levels the vehicle; it vanishes when the
/// vehicle is horizontal.
pub fn buoyancy_gravity_torque_body(params: &VehicleParams, att: &Attitude) -> Vec3 {
    let up_body = crate::types::world_to_body(att, Vec3::new(0.0, 0.0, 1.0));
    params.p_b.cross(&(up_body * params.f_b)) + params.p_g.cross(&(up_body * (-params.m * params.g)))
}

/// Aerodynamic torque opposing spin, body frame: `[0, 0, -d_w·ω_z·|ω_z|]`.
pub fn rotational_drag_body(d_w: f64, omega_z: f64) -> Vec3 {
    Vec3::new(0.0, 0.0, -d_w * omega_z * omega_z.abs())
}

/// Full rigid-body derivative (Newton + Euler with gyroscopic term).
/// Accepts either attitude variant; the returned attitude rate is always a
/// quaternion derivative.
pub fn full_derivative(
    state: &State,
    u: ControlInput,
    params: &VehicleParams,
) -> (StateDot, ForceBreakdown) {
    let q = state.att.quaternion();

    let f_m = q * motor_force_body(u);
    let f_bg = buoyancy_gravity_force_world(params);
    let f_l = q * lift_force_body(params.k_lift, state.omega.z);
    let f_d = drag_force_world(params, state.vel);
    let dvel = (f_m + f_bg + f_l + f_d) / params.m;

    let tau_m = motor_torque_body(u, params.l_m);
    let tau_bg = buoyancy_gravity_torque_body(params, &state.att);
    let tau_d = rotational_drag_body(params.d_w, state.omega.z);
    let i_omega = params.inertia.component_mul(&state.omega);
    let torque = tau_m + tau_bg + tau_d - state.omega.cross(&i_omega);
    let domega = torque.component_div(&params.inertia);

    let dq = q.into_inner() * Quaternion::from_imag(state.omega) * 0.5;

    (
        StateDot {
            dpos: state.vel,
            dvel,
            datt: AttitudeRate::Full(dq),
            domega,
        },
        ForceBreakdown {
            f_m,
            f_bg,
            f_l,
            f_d,
            tau_m,
            tau_bg,
            tau_d,
        },
    )
}

/// Planar-simplified derivative: horizontal vehicle, yaw-only attitude.
///
/// Newton reduces to `R_z(ψ)·[0, f1-f2, 0]` plus the vertical balance
/// `f_b - m·g + k_lift·ω_z²`, minus world-frame drag; Euler reduces to
/// `ω̇_z = (l_m·(f1+f2) - d_w·ω_z|ω_z|) / I_z`.
///
/// Rejects states that are not exactly planar.
pub fn simplified_derivative(
    state: &State,
    u: ControlInput,
    params: &VehicleParams,
) -> Result<StateDot, DynError> {
    let Attitude::Planar(psi) = state.att else {
        return Err(DynError::NotPlanar);
    };
    if state.omega.x != 0.0 || state.omega.y != 0.0 {
        return Err(DynError::NotPlanar);
    }
    let omega_z = state.omega.z;

    let planar = rot_z(psi) * motor_force_body(u);
    let vertical = params.net_buoyancy() + params.k_lift * omega_z * omega_z;
    let force = planar + Vec3::new(0.0, 0.0, vertical) + drag_force_world(params, state.vel);

    let domega_z =
        (params.l_m * u.sum() - params.d_w * omega_z * omega_z.abs()) / params.inertia.z;

    Ok(StateDot {
        dpos: state.vel,
        dvel: force / params.m,
        datt: AttitudeRate::Planar(omega_z),
        domega: Vec3::new(0.0, 0.0, domega_z),
    })
}
