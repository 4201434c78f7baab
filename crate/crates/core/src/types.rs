//! Reference frames, attitude representation, angle utilities, and the
//! domain types shared by every other module.
//!
//! World frame: fixed, z-axis up. Body frame: origin mid-axle, x along the
//! wing axle, z up towards the balloon. All quantities are SI.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, UnitQuaternion, Vector3};
use thiserror::Error;

/// 3D vector in world or body coordinates (m, m/s, N, N·m, rad/s by context).
pub type Vec3 = Vector3<f64>;

/// Violated construction invariant, naming the offending field.
#[derive(Debug, Error, PartialEq)]
#[error("invalid parameter `{key}`: {reason}")]
pub struct ParamError {
    pub key: &'static str,
    pub reason: String,
}

impl ParamError {
    pub fn new(key: &'static str, reason: impl Into<String>) -> Self {
        Self {
            key,
            reason: reason.into(),
        }
    }
}

/// Wrap an angle into `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Rotation matrix for a counter-clockwise rotation by `psi` about the
/// world z-axis.
pub fn rot_z(psi: f64) -> Matrix3<f64> {
    let (s, c) = psi.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Vehicle attitude.
///
/// The full model carries a unit quaternion; planar-model runs store yaw as a
/// scalar so roll and pitch stay zero exactly, not just to tolerance. Both
/// variants expose the same accessors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Attitude {
    /// General 3D attitude, body-to-world rotation.
    Full(UnitQuaternion<f64>),
    /// Yaw-only attitude; roll = pitch = 0 by construction. The stored yaw
    /// is not wrapped, so it doubles as accumulated rotation.
    Planar(f64),
}

impl Attitude {
    pub fn identity() -> Self {
        Attitude::Full(UnitQuaternion::identity())
    }

    pub fn from_yaw(psi: f64) -> Self {
        Attitude::Planar(psi)
    }

    /// Quaternion from roll/pitch/yaw (Z-Y-X convention, `R = Rz·Ry·Rx`).
    pub fn from_euler(roll: f64, pitch: f64, yaw: f64) -> Self {
        Attitude::Full(UnitQuaternion::from_euler_angles(roll, pitch, yaw))
    }

    pub fn is_planar(&self) -> bool {
        matches!(self, Attitude::Planar(_))
    }

    pub fn quaternion(&self) -> UnitQuaternion<f64> {
        match *self {
            Attitude::Full(q) => q,
            Attitude::Planar(psi) => UnitQuaternion::from_axis_angle(&Vector3::z_axis(), psi),
        }
    }

    pub fn roll(&self) -> f64 {
        match *self {
            Attitude::Full(q) => q.euler_angles().0,
            Attitude::Planar(_) => 0.0,
        }
    }

    pub fn pitch(&self) -> f64 {
        match *self {
            Attitude::Full(q) => q.euler_angles().1,
            Attitude::Planar(_) => 0.0,
        }
    }

    pub fn yaw(&self) -> f64 {
        match *self {
            Attitude::Full(q) => q.euler_angles().2,
            Attitude::Planar(psi) => wrap_angle(psi),
        }
    }

    /// Body-to-world rotation matrix.
    pub fn rotation(&self) -> Matrix3<f64> {
        match *self {
            Attitude::Full(q) => q.to_rotation_matrix().into_inner(),
            Attitude::Planar(psi) => rot_z(psi),
        }
    }

    pub fn is_finite(&self) -> bool {
        match *self {
            Attitude::Full(q) => q.coords.iter().all(|c| c.is_finite()),
            Attitude::Planar(psi) => psi.is_finite(),
        }
    }
}

/// Rotate a body-frame vector into the world frame.
pub fn body_to_world(att: &Attitude, v: Vec3) -> Vec3 {
    match *att {
        Attitude::Full(q) => q * v,
        Attitude::Planar(psi) => rot_z(psi) * v,
    }
}

/// Rotate a world-frame vector into the body frame.
pub fn world_to_body(att: &Attitude, v: Vec3) -> Vec3 {
    match *att {
        Attitude::Full(q) => q.inverse() * v,
        Attitude::Planar(psi) => rot_z(-psi) * v,
    }
}

/// Kinematic state: world-frame position and velocity, attitude, body-frame
/// angular velocity.
#[derive(Debug, Clone, Copy)]
pub struct State {
    pub pos: Vec3,
    pub vel: Vec3,
    pub att: Attitude,
    pub omega: Vec3,
}

impl State {
    /// At-rest state at `pos` with the given attitude.
    pub fn at_rest(pos: Vec3, att: Attitude) -> Self {
        Self {
            pos,
            vel: Vec3::zeros(),
            att,
            omega: Vec3::zeros(),
        }
    }

    /// Planar state spinning at `omega_z`, typical initial condition for
    /// simplified-model runs.
    pub fn planar(pos: Vec3, yaw: f64, omega_z: f64) -> Self {
        Self {
            pos,
            vel: Vec3::zeros(),
            att: Attitude::from_yaw(yaw),
            omega: Vec3::new(0.0, 0.0, omega_z),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.pos.iter().all(|c| c.is_finite())
            && self.vel.iter().all(|c| c.is_finite())
            && self.omega.iter().all(|c| c.is_finite())
            && self.att.is_finite()
    }
}

/// Physical constants of the vehicle. Constructed through [`VehicleParams::validated`]
/// (or the presets) so the invariants hold for every instance handed to the
/// dynamics.
#[derive(Debug, Clone, Copy)]
pub struct VehicleParams {
    /// Total mass (kg).
    pub m: f64,
    /// Gravitational acceleration (m/s²).
    pub g: f64,
    /// Buoyant force of the envelope (N). Must satisfy `f_b < m·g`
    /// (slightly negative net buoyancy).
    pub f_b: f64,
    /// Motor arm: half the wing axle (m).
    pub l_m: f64,
    /// Wing lift coefficient (N·s²/rad²): lift = `k_lift · ω_z²`.
    pub k_lift: f64,
    /// Translational drag coefficients (N·s²/m²), world axes.
    pub d_x: f64,
    pub d_y: f64,
    pub d_z: f64,
    /// Rotational drag coefficient about body z (N·m·s²/rad²).
    pub d_w: f64,
    /// Diagonal inertia tensor entries (kg·m²).
    pub inertia: Vec3,
    /// Center of pressure of the envelope, body frame (m).
    pub p_b: Vec3,
    /// Center of mass, body frame (m).
    pub p_g: Vec3,
    /// Per-motor thrust limit (N).
    pub f_max: f64,
}

impl VehicleParams {
    /// Default parameter set: 60 g of envelope lift against a 65 g vehicle
    /// (5 g net heaviness), 0.7 m axle, 15 g per-motor static thrust,
    /// lift coefficient sized for a 10 rad/s hover spin.
    pub fn defaults() -> Self {
        Self {
            m: 0.065,
            g: 9.81,
            f_b: 0.060 * 9.81,
            l_m: 0.35,
            k_lift: 4.905e-4,
            d_x: 0.02,
            d_y: 0.02,
            d_z: 0.03,
            d_w: 1e-4,
            inertia: Vec3::new(2.0e-3, 2.0e-3, 3.5e-3),
            p_b: Vec3::new(0.0, 0.0, 0.20),
            p_g: Vec3::new(0.0, 0.0, -0.02),
            f_max: 0.015 * 9.81,
        }
    }

    /// Long-wing variant: 1.3 m axle.
    pub fn long_wing() -> Self {
        Self {
            l_m: 0.65,
            ..Self::defaults()
        }
    }

    /// Check all construction invariants, returning `self` on success.
    pub fn validated(self) -> Result<Self, ParamError> {
        fn positive(key: &'static str, v: f64) -> Result<(), ParamError> {
            if !(v.is_finite() && v > 0.0) {
                return Err(ParamError::new(key, format!("must be > 0, got {v}")));
            }
            Ok(())
        }
        fn non_negative(key: &'static str, v: f64) -> Result<(), ParamError> {
            if !(v.is_finite() && v >= 0.0) {
                return Err(ParamError::new(key, format!("must be >= 0, got {v}")));
            }
            Ok(())
        }
        positive("m", self.m)?;
        positive("g", self.g)?;
        positive("l_m", self.l_m)?;
        positive("k_lift", self.k_lift)?;
        positive("f_max", self.f_max)?;
        non_negative("f_b", self.f_b)?;
        non_negative("d_x", self.d_x)?;
        non_negative("d_y", self.d_y)?;
        non_negative("d_z", self.d_z)?;
        non_negative("d_w", self.d_w)?;
        positive("i_x", self.inertia.x)?;
        positive("i_y", self.inertia.y)?;
        positive("i_z", self.inertia.z)?;
        for (key, v) in [("p_b", self.p_b), ("p_g", self.p_g)] {
            if !v.iter().all(|c| c.is_finite()) {
                return Err(ParamError::new(key, "must be finite"));
            }
        }
        if self.f_b - self.m * self.g >= 0.0 {
            return Err(ParamError::new(
                "f_b",
                format!(
                    "net buoyancy f_b - m*g must be negative, got {}",
                    self.f_b - self.m * self.g
                ),
            ));
        }
        Ok(self)
    }

    /// Net buoyancy `f_b - m·g` (N); negative for a valid vehicle.
    pub fn net_buoyancy(&self) -> f64 {
        self.f_b - self.m * self.g
    }
}

/// The two motor thrusts, in newtons. Admissible inputs satisfy
/// `0 <= f_i <= f_max`; [`ControlInput::saturate`] clamps into that box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlInput {
    pub f1: f64,
    pub f2: f64,
}

impl ControlInput {
    pub const ZERO: Self = Self { f1: 0.0, f2: 0.0 };

    pub fn new(f1: f64, f2: f64) -> Self {
        Self { f1, f2 }
    }

    /// Clamp both thrusts to `[0, f_max]`.
    pub fn saturate(self, f_max: f64) -> Self {
        Self {
            f1: self.f1.clamp(0.0, f_max),
            f2: self.f2.clamp(0.0, f_max),
        }
    }

    pub fn is_admissible(self, f_max: f64) -> bool {
        (0.0..=f_max).contains(&self.f1) && (0.0..=f_max).contains(&self.f2)
    }

    pub fn sum(self) -> f64 {
        self.f1 + self.f2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use nalgebra::Quaternion;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn rot_z_identity() {
        let r = rot_z(0.0);
        assert_abs_diff_eq!(r, Matrix3::identity(), epsilon = 1e-15);
    }

    #[test]
    fn rot_z_quarter_turn() {
        let v = rot_z(FRAC_PI_2) * Vec3::new(1.0, 0.0, 0.0);
        assert_abs_diff_eq!(v, Vec3::new(0.0, 1.0, 0.0), epsilon = 1e-15);
    }

    #[test]
    fn rot_z_half_turn() {
        let v = rot_z(PI) * Vec3::new(0.0, 1.0, 0.0);
        assert_abs_diff_eq!(v, Vec3::new(0.0, -1.0, 0.0), epsilon = 1e-15);
    }

    #[test]
    fn wrap_angle_basics() {
        assert_eq!(wrap_angle(0.0), 0.0);
        assert_abs_diff_eq!(wrap_angle(3.0 * PI), PI, epsilon = 1e-12);
        assert_abs_diff_eq!(wrap_angle(-1.5 * PI), FRAC_PI_2, epsilon = 1e-12);
        // -pi maps to the closed upper end of the interval
        assert_abs_diff_eq!(wrap_angle(-PI), PI, epsilon = 1e-12);
        assert_eq!(wrap_angle(PI), PI);
    }

    #[test]
    fn body_to_world_identity_attitude() {
        let v = Vec3::new(1.0, 2.0, 3.0);
        assert_abs_diff_eq!(body_to_world(&Attitude::identity(), v), v, epsilon = 1e-15);
    }

    #[test]
    fn body_to_world_yaw_matches_rot_z() {
        let att = Attitude::from_yaw(FRAC_PI_2);
        let v = body_to_world(&att, Vec3::new(0.0, 1.0, 0.0));
        assert_abs_diff_eq!(v, Vec3::new(-1.0, 0.0, 0.0), epsilon = 1e-15);
        // the quaternion route agrees with the scalar-yaw route
        let att_q = Attitude::from_euler(0.0, 0.0, FRAC_PI_2);
        let vq = body_to_world(&att_q, Vec3::new(0.0, 1.0, 0.0));
        assert_abs_diff_eq!(v, vq, epsilon = 1e-14);
    }

    #[test]
    fn yaw_extraction_matches_rotation() {
        for psi in [-2.7, -0.4, 0.0, 0.9, 3.0] {
            let att = Attitude::from_euler(0.0, 0.0, psi);
            assert_relative_eq!(att.yaw(), psi, epsilon = 1e-12);
            assert_abs_diff_eq!(att.rotation(), rot_z(psi), epsilon = 1e-12);
        }
    }

    #[test]
    fn quaternion_norm_stays_unit_over_many_steps() {
        // Repeated integrate-and-renormalize, one million steps.
        let omega = Vec3::new(0.3, -0.2, 9.0);
        let dt = 1e-3;
        let mut q = UnitQuaternion::from_euler_angles(0.1, -0.05, 0.4);
        for _ in 0..1_000_000 {
            let dq = q.into_inner() * Quaternion::from_imag(omega) * 0.5;
            q = UnitQuaternion::new_normalize(q.into_inner() + dq * dt);
            debug_assert!(q.coords.norm().is_finite());
        }
        assert!((q.coords.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn params_defaults_satisfy_invariants() {
        let p = VehicleParams::defaults().validated().unwrap();
        assert_relative_eq!(p.net_buoyancy(), -0.04905, epsilon = 1e-12);
        assert!(VehicleParams::long_wing().validated().is_ok());
    }

    #[test]
    fn params_reject_neutral_buoyancy() {
        let p = VehicleParams {
            f_b: 0.065 * 9.81,
            ..VehicleParams::defaults()
        };
        let err = p.validated().unwrap_err();
        assert_eq!(err.key, "f_b");
    }

    #[test]
    fn params_reject_nonpositive_fields() {
        let p = VehicleParams {
            f_max: -1.0,
            ..VehicleParams::defaults()
        };
        assert_eq!(p.validated().unwrap_err().key, "f_max");
        let p = VehicleParams {
            inertia: Vec3::new(1e-3, 0.0, 1e-3),
            ..VehicleParams::defaults()
        };
        assert_eq!(p.validated().unwrap_err().key, "i_y");
    }

    #[test]
    fn control_input_saturation() {
        let u = ControlInput::new(-0.2, 0.5).saturate(0.14715);
        assert_eq!(u.f1, 0.0);
        assert_eq!(u.f2, 0.14715);
        assert!(u.is_admissible(0.14715));
    }

    proptest! {
        #[test]
        fn wrap_angle_range_and_congruence(theta in -50.0..50.0f64) {
            let w = wrap_angle(theta);
            prop_assert!(w > -PI && w <= PI);
            // congruent mod 2*pi
            let diff = (theta - w) / TAU;
            prop_assert!((diff - diff.round()).abs() < 1e-9);
        }

        #[test]
        fn rot_z_composition(a in -7.0..7.0f64, b in -7.0..7.0f64) {
            let lhs = rot_z(a) * rot_z(b);
            let rhs = rot_z(wrap_angle(a + b));
            for (x, y) in lhs.iter().zip(rhs.iter()) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }

        #[test]
        fn world_body_round_trip(
            roll in -1.5..1.5f64, pitch in -1.5..1.5f64, yaw in -3.0..3.0f64,
            x in -10.0..10.0f64, y in -10.0..10.0f64, z in -10.0..10.0f64,
        ) {
            let att = Attitude::from_euler(roll, pitch, yaw);
            let v = Vec3::new(x, y, z);
            let back = world_to_body(&att, body_to_world(&att, v));
            prop_assert!((back - v).norm() < 1e-12);
            // rotation preserves length
            prop_assert!((body_to_world(&att, v).norm() - v.norm()).abs() < 1e-12);
        }
    }
}
