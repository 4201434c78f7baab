//! Flight dynamics, control, and experiment harness for a two-motor
//! buoyancy-assisted spinning aerial vehicle.
//!
//! The vehicle carries a helium envelope that offsets most of its weight and
//! two wing-tip motors that spin the whole airframe. Spin rate sets wing lift
//! and therefore altitude; a switching (bang-bang) thrust differential steers
//! the vehicle on the plane while it rotates. This crate provides:
//!
//! - [`types`]: reference frames, attitude, and the shared domain types
//! - [`dynamics`]: force/torque models and state derivatives (full and
//!   planar-simplified rigid-body models)
//! - [`sim`]: deterministic fixed-step RK4 simulation with CSV logging
//! - [`control`]: spin-rate height control and the bang-bang position
//!   controller
//! - [`trajectory`]: reference generators (triangle, Lissajous) and tracking
//!   metrics
//! - [`behavior`]: 2D raycast range sensor, scan buffer, and the wall-bounce
//!   random-walk exploration policy
//! - [`analysis`]: equilibria, lift-coefficient calibration, planar
//!   linearization with finite-difference checks, and Lyapunov monitors
//! - [`config`] / [`experiments`]: config-file driven experiment runner used
//!   by the `spinblimp` binary

pub mod analysis;
pub mod behavior;
pub mod config;
pub mod control;
pub mod dynamics;
pub mod experiments;
pub mod sim;
pub mod trajectory;
pub mod types;

pub use types::{Attitude, ControlInput, State, Vec3, VehicleParams};
