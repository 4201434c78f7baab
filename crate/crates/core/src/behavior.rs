//! Exploration by random walk with a spinning single-ray range sensor.
//!
//! The vehicle's own rotation sweeps a time-of-flight ranger through a full
//! circle twice a second, so a ring buffer of (yaw, distance) samples stands
//! in for a scanning lidar. The walk keeps a fixed forward speed by feeding
//! a moving goal to the position controller; when the closest return drops
//! under a threshold while the walk approaches it, the direction reflects
//! specularly off the struck wall and the walk resumes.

use std::collections::VecDeque;
use std::f64::consts::{FRAC_PI_2, TAU};

use nalgebra::Vector2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::control::{position_control_detailed, Gains, Reference};
use crate::sim::{ControlOutput, Controller};
use crate::types::{wrap_angle, State, Vec3, VehicleParams};

#[derive(Debug, Error, PartialEq)]
pub enum EnvError {
    #[error("environment needs at least one wall segment")]
    Empty,
    #[error("wall segment {0} is degenerate or non-finite")]
    BadSegment(usize),
    #[error("ray origin ({0}, {1}) lies outside the environment")]
    OriginOutside(f64, f64),
}

#[derive(Debug, Error, PartialEq)]
pub enum ScanError {
    #[error("scan has not yet covered a full revolution")]
    NotReady,
}

/// One wall: a 2D segment with its unit normal. The normal's sign does not
/// affect specular reflection.
#[derive(Debug, Clone, Copy)]
pub struct Wall {
    pub a: Vector2<f64>,
    pub b: Vector2<f64>,
    pub normal: Vector2<f64>,
}

/// Polygonal wall set in the world xy-plane.
#[derive(Debug, Clone)]
pub struct Environment {
    pub walls: Vec<Wall>,
}

impl Environment {
    pub fn new(segments: &[(Vector2<f64>, Vector2<f64>)]) -> Result<Self, EnvError> {
        if segments.is_empty() {
            return Err(EnvError::Empty);
        }
        let mut walls = Vec::with_capacity(segments.len());
        for (i, (a, b)) in segments.iter().enumerate() {
            let edge = b - a;
            let len = edge.norm();
            if !(len.is_finite() && len > 0.0) || !a.iter().chain(b.iter()).all(|c| c.is_finite()) {
                return Err(EnvError::BadSegment(i));
            }
            walls.push(Wall {
                a: *a,
                b: *b,
                normal: Vector2::new(-edge.y, edge.x) / len,
            });
        }
        Ok(Self { walls })
    }

    /// Axis-aligned rectangular room centered at the origin.
    pub fn rectangle(width: f64, height: f64) -> Self {
        let (hw, hh) = (width / 2.0, height / 2.0);
        let c = [
            Vector2::new(-hw, -hh),
            Vector2::new(hw, -hh),
            Vector2::new(hw, hh),
            Vector2::new(-hw, hh),
        ];
        Self::new(&[(c[0], c[1]), (c[1], c[2]), (c[2], c[3]), (c[3], c[0])])
            .expect("rectangle is a valid environment")
    }

    /// Even-odd test casting a +x ray through the wall set.
    pub fn contains(&self, p: Vector2<f64>) -> bool {
        let mut inside = false;
        for w in &self.walls {
            let (a, b) = (w.a, w.b);
            if (a.y > p.y) != (b.y > p.y) {
                let x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x_cross {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

/// Result of one range measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RayReturn {
    Hit {
        distance: f64,
        /// Index of the struck wall in [`Environment::walls`].
        wall: usize,
    },
    /// Nothing within `max_range`.
    NoReturn,
}

/// Cast a ray from `origin` at world angle `angle` (radians from +x) and
/// return the nearest wall intersection within `max_range`. Errors if the
/// origin is outside the walls.
pub fn tof_raycast(
    env: &Environment,
    origin: Vector2<f64>,
    angle: f64,
    max_range: f64,
) -> Result<RayReturn, EnvError> {
    if !env.contains(origin) {
        return Err(EnvError::OriginOutside(origin.x, origin.y));
    }
    let dir = Vector2::new(angle.cos(), angle.sin());
    let cross = |u: Vector2<f64>, v: Vector2<f64>| u.x * v.y - u.y * v.x;

    let mut best: Option<(f64, usize)> = None;
    for (i, w) in env.walls.iter().enumerate() {
        let edge = w.b - w.a;
        let denom = cross(dir, edge);
        if denom.abs() < 1e-12 {
            continue; // parallel ray never registers the wall it grazes
        }
        let rel = w.a - origin;
        let t = cross(rel, edge) / denom;
        let s = cross(rel, dir) / denom;
        if t >= 0.0 && (0.0..=1.0).contains(&s) && best.is_none_or(|(bt, _)| t < bt) {
            best = Some((t, i));
        }
    }
    Ok(match best {
        Some((distance, wall)) if distance <= max_range => RayReturn::Hit { distance, wall },
        _ => RayReturn::NoReturn,
    })
}

#[derive(Debug, Clone, Copy)]
struct ScanSample {
    /// Unwrapped beam yaw (rad), monotone over the buffer.
    yaw: f64,
    ret: RayReturn,
}

/// Closest return of a full-revolution scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinReading {
    /// Beam yaw of the minimum, wrapped to `(-pi, pi]`.
    pub yaw: f64,
    pub distance: f64,
    pub wall: usize,
}

/// Ring buffer of range samples over the most recent full revolution.
#[derive(Debug, Clone)]
pub struct ToFScan {
    samples: VecDeque<ScanSample>,
    pub max_range: f64,
    covered: bool,
}

impl ToFScan {
    pub fn new(max_range: f64) -> Self {
        Self {
            samples: VecDeque::new(),
            max_range,
            covered: false,
        }
    }

    /// Push a sample taken at unwrapped beam yaw `yaw`; drops samples older
    /// than one revolution.
    pub fn push(&mut self, yaw: f64, ret: RayReturn) {
        self.samples.push_back(ScanSample { yaw, ret });
        let span = yaw - self.samples.front().expect("just pushed").yaw;
        if span >= TAU {
            self.covered = true;
        }
        while let Some(front) = self.samples.front() {
            if yaw - front.yaw > TAU {
                self.samples.pop_front();
            } else {
                break;
            }
        }
    }

    /// Whether the buffer has ever spanned a full revolution.
    pub fn ready(&self) -> bool {
        self.covered
    }

    /// Largest angular gap between consecutive samples in the buffer (rad).
    pub fn max_angular_gap(&self) -> f64 {
        self.samples
            .iter()
            .zip(self.samples.iter().skip(1))
            .map(|(a, b)| b.yaw - a.yaw)
            .fold(0.0, f64::max)
    }

    /// The sample with the smallest distance, ties broken by the most recent
    /// sample. `Ok(None)` when the whole revolution saw no return.
    pub fn min_distance_heading(&self) -> Result<Option<MinReading>, ScanError> {
        if !self.ready() {
            return Err(ScanError::NotReady);
        }
        let mut best: Option<MinReading> = None;
        for s in &self.samples {
            if let RayReturn::Hit { distance, wall } = s.ret {
                if best.as_ref().is_none_or(|b| distance <= b.distance) {
                    best = Some(MinReading {
                        yaw: wrap_angle(s.yaw),
                        distance,
                        wall,
                    });
                }
            }
        }
        Ok(best)
    }
}

/// Specular reflection of `v` off a surface with unit normal `n`:
/// `v' = v - 2(v·n)n`. Preserves the speed exactly.
pub fn reflect_velocity(v: Vector2<f64>, n: Vector2<f64>) -> Vector2<f64> {
    v - n * (2.0 * v.dot(&n))
}

/// Tunables of the random-walk policy. None of these are dictated by the
/// vehicle; all are mission parameters.
#[derive(Debug, Clone, Copy)]
pub struct RandomWalkConfig {
    /// Bounce when the closest return drops under this distance (m).
    pub threshold: f64,
    /// Forward walk speed (m/s).
    pub speed: f64,
    /// Range samples per second (Hz).
    pub sensor_rate: f64,
    /// Sensor range (m).
    pub max_range: f64,
    /// Cruise altitude (m).
    pub z_d: f64,
    /// Carrot lead distance ahead of the nominal walk point (m).
    pub lead: f64,
}

impl Default for RandomWalkConfig {
    fn default() -> Self {
        Self {
            threshold: 0.5,
            speed: 0.15,
            sensor_rate: 100.0,
            max_range: 2.5,
            z_d: 1.0,
            lead: 0.1,
        }
    }
}

/// One direction change of the walk.
#[derive(Debug, Clone, Copy)]
pub struct BounceEvent {
    pub t: f64,
    pub pos: Vector2<f64>,
    pub dir_before: Vector2<f64>,
    pub dir_after: Vector2<f64>,
    pub wall_normal: Vector2<f64>,
}

/// Wall-bounce exploration: fixed-speed walk along a direction, specular
/// reflection off whichever wall the scan flags as closest once it comes
/// nearer than the threshold. Only the initial direction is random (seeded);
/// everything after is deterministic.
pub struct RandomWalkController {
    pub env: Environment,
    pub cfg: RandomWalkConfig,
    pub gains: Gains,
    scan: ToFScan,
    dir: Vector2<f64>,
    anchor: Vector2<f64>,
    t_anchor: f64,
    next_sample_t: f64,
    yaw_unwrapped: f64,
    last_yaw: Option<f64>,
    bounces: Vec<BounceEvent>,
    /// Set when a raycast reports the vehicle outside the walls.
    pub escaped: bool,
}

impl RandomWalkController {
    pub fn new(env: Environment, cfg: RandomWalkConfig, gains: Gains, start: Vector2<f64>, seed: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let angle = rng.random_range(0.0..TAU);
        Self {
            env,
            cfg,
            gains,
            scan: ToFScan::new(cfg.max_range),
            dir: Vector2::new(angle.cos(), angle.sin()),
            anchor: start,
            t_anchor: 0.0,
            next_sample_t: 0.0,
            yaw_unwrapped: 0.0,
            last_yaw: None,
            bounces: Vec::new(),
            escaped: false,
        }
    }

    pub fn bounces(&self) -> &[BounceEvent] {
        &self.bounces
    }

    pub fn scan(&self) -> &ToFScan {
        &self.scan
    }

    pub fn direction(&self) -> Vector2<f64> {
        self.dir
    }

    fn track_yaw(&mut self, yaw: f64) {
        match self.last_yaw {
            None => self.yaw_unwrapped = yaw,
            Some(prev) => self.yaw_unwrapped += wrap_angle(yaw - prev),
        }
        self.last_yaw = Some(yaw);
    }

    fn sample_and_maybe_bounce(&mut self, t: f64, state: &State) {
        // the ranger looks along body +y, so the beam's world angle is the
        // body-y direction angle
        let beam_yaw = self.yaw_unwrapped + FRAC_PI_2;
        let origin = state.pos.xy();
        let ret = match tof_raycast(&self.env, origin, beam_yaw, self.cfg.max_range) {
            Ok(r) => r,
            Err(_) => {
                self.escaped = true;
                RayReturn::NoReturn
            }
        };
        self.scan.push(beam_yaw, ret);

        let Ok(Some(min)) = self.scan.min_distance_heading() else {
            return;
        };
        if min.distance >= self.cfg.threshold {
            return;
        }
        // bounce only off walls the walk is actually approaching; a wall
        // just bounced off stays behind and is ignored until it recedes
        let toward = Vector2::new(min.yaw.cos(), min.yaw.sin());
        if self.dir.dot(&toward) <= 0.0 {
            return;
        }
        let normal = self.env.walls[min.wall].normal;
        let new_dir = reflect_velocity(self.dir, normal);
        self.bounces.push(BounceEvent {
            t,
            pos: origin,
            dir_before: self.dir,
            dir_after: new_dir,
            wall_normal: normal,
        });
        self.dir = new_dir;
        self.anchor = origin;
        self.t_anchor = t;
    }
}

impl Controller for RandomWalkController {
    fn control(&mut self, t: f64, state: &State, params: &VehicleParams) -> ControlOutput {
        self.track_yaw(state.att.yaw());
        if t >= self.next_sample_t {
            self.sample_and_maybe_bounce(t, state);
            self.next_sample_t += 1.0 / self.cfg.sensor_rate;
        }

        // moving carrot: walk point advancing at the configured speed plus a
        // short lead so the controller keeps pushing
        let along = self.cfg.speed * (t - self.t_anchor) + self.cfg.lead;
        let goal = self.anchor + self.dir * along;
        let reference = Reference {
            pos: Vec3::new(goal.x, goal.y, self.cfg.z_d),
            vel: Vec3::new(
                self.cfg.speed * self.dir.x,
                self.cfg.speed * self.dir.y,
                0.0,
            ),
            accel_z: 0.0,
        };
        let (u, telemetry) = position_control_detailed(state, &reference, params, &self.gains);
        ControlOutput {
            u,
            reference: Some(reference),
            beta: telemetry.beta,
            omega_z_setpoint: Some(telemetry.omega_z_setpoint),
            lyapunov_z: None,
        }
    }
}
