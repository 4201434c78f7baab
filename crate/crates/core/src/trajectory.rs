//! Reference trajectory generators and tracking-error metrics.
//!
//! Two references cover the tracking experiments: a constant-speed loop over
//! a triangle (sharp turns) and a Lissajous curve (smooth turns in both
//! directions). Generators return position, analytic velocity, and vertical
//! acceleration; a bisection helper scales Lissajous time to hit a target
//! average path speed.

use std::f64::consts::TAU;

use thiserror::Error;

use crate::control::Reference;
use crate::sim::LogRow;
use crate::types::{ParamError, Vec3};

#[derive(Debug, Error, PartialEq)]
pub enum TrajectoryError {
    #[error("metrics require a non-empty log with finite errors")]
    EmptyLog,
    #[error("calibration target must be > 0 and reachable, got {0}")]
    BadTarget(f64),
}

/// Lissajous curve `[A·sin(a·θ + δx), B·sin(b·θ + δy), z_d]` with scaled
/// time `θ = speed_scale·t`.
#[derive(Debug, Clone, Copy)]
pub struct LissajousParams {
    pub amp_x: f64,
    pub amp_y: f64,
    pub freq_x: f64,
    pub freq_y: f64,
    pub phase_x: f64,
    pub phase_y: f64,
    /// Constant altitude of the curve (m).
    pub z_d: f64,
    /// Time-dilation factor mapping wall time to curve parameter.
    pub speed_scale: f64,
}

impl Default for LissajousParams {
    /// The experiment constants: A=4, B=2, a=1, b=2, δx=π/2, δy=0.
    fn default() -> Self {
        Self {
            amp_x: 4.0,
            amp_y: 2.0,
            freq_x: 1.0,
            freq_y: 2.0,
            phase_x: std::f64::consts::FRAC_PI_2,
            phase_y: 0.0,
            z_d: 1.0,
            speed_scale: 1.0,
        }
    }
}

impl LissajousParams {
    pub fn validated(self) -> Result<Self, ParamError> {
        if !(self.amp_x.is_finite() && self.amp_x >= 0.0) {
            return Err(ParamError::new("amp_x", "must be >= 0"));
        }
        if !(self.amp_y.is_finite() && self.amp_y >= 0.0) {
            return Err(ParamError::new("amp_y", "must be >= 0"));
        }
        if !(self.speed_scale.is_finite() && self.speed_scale > 0.0) {
            return Err(ParamError::new("speed_scale", "must be > 0"));
        }
        Ok(self)
    }

    /// Wall-clock duration of one full cycle, `2π / speed_scale`, the
    /// fundamental period when the frequency ratio is a reduced integer
    /// ratio with unit slower frequency (the default 1:2 curve).
    pub fn period(&self) -> f64 {
        TAU / self.speed_scale
    }

    /// Path length of one cycle (geometry only; independent of
    /// `speed_scale`). Composite-Simpson quadrature of `‖dpos/dθ‖`.
    pub fn arc_length(&self) -> f64 {
        let n = 8192; // even
        let h = TAU / n as f64;
        let speed_theta = |theta: f64| -> f64 {
            let dx = self.amp_x * self.freq_x * (self.freq_x * theta + self.phase_x).cos();
            let dy = self.amp_y * self.freq_y * (self.freq_y * theta + self.phase_y).cos();
            (dx * dx + dy * dy).sqrt()
        };
        let mut sum = speed_theta(0.0) + speed_theta(TAU);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * speed_theta(i as f64 * h);
        }
        sum * h / 3.0
    }

    /// Average path speed over one cycle: `speed_scale · arc_length / 2π`.
    pub fn average_speed(&self) -> f64 {
        self.speed_scale * self.arc_length() / TAU
    }
}

/// Reference on the Lissajous curve at time `t`, velocity by analytic
/// differentiation.
pub fn lissajous_ref(t: f64, p: &LissajousParams) -> Reference {
    let s = p.speed_scale;
    let theta = s * t;
    let px = p.freq_x * theta + p.phase_x;
    let py = p.freq_y * theta + p.phase_y;
    Reference {
        pos: Vec3::new(p.amp_x * px.sin(), p.amp_y * py.sin(), p.z_d),
        vel: Vec3::new(
            p.amp_x * p.freq_x * s * px.cos(),
            p.amp_y * p.freq_y * s * py.cos(),
            0.0,
        ),
        accel_z: 0.0,
    }
}

/// Planar acceleration of the Lissajous reference (used for the curvature
/// sign in the cross-track statistic).
fn lissajous_accel(t: f64, p: &LissajousParams) -> (f64, f64) {
    let s = p.speed_scale;
    let theta = s * t;
    let wx = p.freq_x * s;
    let wy = p.freq_y * s;
    (
        -p.amp_x * wx * wx * (p.freq_x * theta + p.phase_x).sin(),
        -p.amp_y * wy * wy * (p.freq_y * theta + p.phase_y).sin(),
    )
}

/// Scale Lissajous time so the average path speed hits `target` (m/s), by
/// bisection on the arc-length integral. The bracket is grown by doubling
/// until it straddles the target.
pub fn calibrate_speed_scale(
    p: &LissajousParams,
    target: f64,
) -> Result<LissajousParams, TrajectoryError> {
    if !(target.is_finite() && target > 0.0) {
        return Err(TrajectoryError::BadTarget(target));
    }
    let arc = p.arc_length();
    if !(arc.is_finite() && arc > 0.0) {
        return Err(TrajectoryError::BadTarget(target));
    }
    let avg_at = |s: f64| s * arc / TAU;

    let mut lo = 1e-9;
    let mut hi = 1.0;
    while avg_at(hi) < target {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(TrajectoryError::BadTarget(target));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if avg_at(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) / hi < 1e-12 {
            break;
        }
    }
    Ok(LissajousParams {
        speed_scale: 0.5 * (lo + hi),
        ..*p
    })
}

/// Traversal direction of the triangle loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Cw,
    Ccw,
}

/// Constant-speed piecewise-linear loop over three vertices.
#[derive(Debug, Clone, Copy)]
pub struct TriangleParams {
    pub vertices: [Vec3; 3],
    /// Path speed (m/s).
    pub speed: f64,
    pub direction: Direction,
}

impl TriangleParams {
    /// Equilateral triangle of the given side length centered at `center`,
    /// vertices listed counter-clockwise starting from the top.
    pub fn equilateral(side: f64, center: Vec3, speed: f64, direction: Direction) -> Self {
        let r = side / 3.0f64.sqrt(); // circumradius
        let vertex = |angle_deg: f64| {
            let a = angle_deg.to_radians();
            center + Vec3::new(r * a.cos(), r * a.sin(), 0.0)
        };
        Self {
            vertices: [vertex(90.0), vertex(210.0), vertex(330.0)],
            speed,
            direction,
        }
    }

    pub fn validated(self) -> Result<Self, ParamError> {
        if !(self.speed.is_finite() && self.speed > 0.0) {
            return Err(ParamError::new("speed", "must be > 0"));
        }
        let [a, b, c] = self.vertices;
        if (b - a).cross(&(c - a)).norm() < 1e-12 {
            return Err(ParamError::new("vertices", "must not be collinear"));
        }
        Ok(self)
    }

    fn ordered(&self) -> [Vec3; 3] {
        match self.direction {
            Direction::Ccw => self.vertices,
            Direction::Cw => [self.vertices[0], self.vertices[2], self.vertices[1]],
        }
    }

    pub fn perimeter(&self) -> f64 {
        let v = self.ordered();
        (v[1] - v[0]).norm() + (v[2] - v[1]).norm() + (v[0] - v[2]).norm()
    }

    /// Wall-clock duration of one full loop.
    pub fn lap_time(&self) -> f64 {
        self.perimeter() / self.speed
    }
}

/// Reference on the triangle loop at time `t`: constant speed along the
/// current side, looping forever.
pub fn triangle_ref(t: f64, p: &TriangleParams) -> Reference {
    let v = p.ordered();
    let perimeter = p.perimeter();
    let mut s = (t * p.speed).rem_euclid(perimeter);
    for i in 0..3 {
        let a = v[i];
        let b = v[(i + 1) % 3];
        let len = (b - a).norm();
        if s <= len {
            let dir = (b - a) / len;
            return Reference {
                pos: a + dir * s,
                vel: dir * p.speed,
                accel_z: 0.0,
            };
        }
        s -= len;
    }
    // numerically s can land a hair past the final side; close the loop
    Reference {
        pos: v[0],
        vel: (v[1] - v[0]).normalize() * p.speed,
        accel_z: 0.0,
    }
}

/// Summary statistics of the tracking error `e = ‖x_d - x‖` over a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackingMetrics {
    pub mean_e: f64,
    pub max_e: f64,
    pub rmse: f64,
}

pub fn tracking_metrics(errors: &[f64]) -> Result<TrackingMetrics, TrajectoryError> {
    if errors.is_empty() || errors.iter().any(|e| !e.is_finite()) {
        return Err(TrajectoryError::EmptyLog);
    }
    let n = errors.len() as f64;
    let mean_e = errors.iter().sum::<f64>() / n;
    let max_e = errors.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let rmse = (errors.iter().map(|e| e * e).sum::<f64>() / n).sqrt();
    Ok(TrackingMetrics { mean_e, max_e, rmse })
}

/// Signed radial tracking deviation split by turn direction.
///
/// For each logged sample the deviation from the curve is projected on the
/// outward radial direction (away from the local curvature center), positive
/// = overshooting to the outside of the turn. Samples are grouped by the
/// sign of the reference curvature: counter-clockwise arcs (curvature > 0)
/// and clockwise arcs.
#[derive(Debug, Clone, Copy)]
pub struct CrossTrackStats {
    pub mean_radial_ccw: f64,
    pub mean_radial_cw: f64,
    pub samples_ccw: usize,
    pub samples_cw: usize,
}

pub fn lissajous_cross_track(rows: &[LogRow], p: &LissajousParams, t_min: f64) -> CrossTrackStats {
    let mut sum_ccw = 0.0;
    let mut n_ccw = 0usize;
    let mut sum_cw = 0.0;
    let mut n_cw = 0usize;
    for row in rows.iter().filter(|r| r.t >= t_min) {
        let reference = lissajous_ref(row.t, p);
        let v = reference.vel.xy();
        let speed = v.norm();
        if speed < 1e-6 {
            continue;
        }
        let (ax, ay) = lissajous_accel(row.t, p);
        let cross = v.x * ay - v.y * ax;
        if cross.abs() < 1e-9 {
            continue; // inflection, no turn direction
        }
        let tangent = v / speed;
        let sign = cross.signum();
        // outward radial direction: away from the curvature center
        let outward = nalgebra::Vector2::new(sign * tangent.y, -sign * tangent.x);
        let deviation = (row.pos - reference.pos).xy();
        let radial = deviation.dot(&outward);
        if sign > 0.0 {
            sum_ccw += radial;
            n_ccw += 1;
        } else {
            sum_cw += radial;
            n_cw += 1;
        }
    }
    CrossTrackStats {
        mean_radial_ccw: if n_ccw > 0 { sum_ccw / n_ccw as f64 } else { f64::NAN },
        mean_radial_cw: if n_cw > 0 { sum_cw / n_cw as f64 } else { f64::NAN },
        samples_ccw: n_ccw,
        samples_cw: n_cw,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn lissajous_starting_point_with_experiment_constants() {
        let p = LissajousParams::default();
        let r = lissajous_ref(0.0, &p);
        assert_abs_diff_eq!(r.pos, Vec3::new(4.0, 0.0, p.z_d), epsilon = 1e-12);
    }

    #[test]
    fn lissajous_periodicity() {
        let p = LissajousParams {
            speed_scale: 0.2,
            ..LissajousParams::default()
        };
        for t in [0.3, 1.7, 12.0] {
            let a = lissajous_ref(t, &p);
            let b = lissajous_ref(t + p.period(), &p);
            assert_abs_diff_eq!(a.pos, b.pos, epsilon = 1e-9);
            assert_abs_diff_eq!(a.vel, b.vel, epsilon = 1e-9);
        }
    }

    #[test]
    fn lissajous_velocity_matches_finite_difference() {
        let p = LissajousParams {
            speed_scale: 0.7,
            ..LissajousParams::default()
        };
        let h = 1e-6;
        for i in 0..50 {
            let t = 0.11 * i as f64;
            let v = lissajous_ref(t, &p).vel;
            let fd = (lissajous_ref(t + h, &p).pos - lissajous_ref(t - h, &p).pos) / (2.0 * h);
            assert!((v - fd).norm() < 1e-6, "t = {t}: {v:?} vs {fd:?}");
        }
    }

    #[test]
    fn speed_calibration_hits_target() {
        let p = LissajousParams::default();
        for target in [0.13, 0.21, 0.42] {
            let cal = calibrate_speed_scale(&p, target).unwrap();
            let avg = cal.average_speed();
            assert!(
                ((avg - target) / target).abs() < 0.01,
                "target {target}: calibrated average {avg}"
            );
        }
    }

    #[test]
    fn calibration_rejects_bad_target() {
        let p = LissajousParams::default();
        assert!(calibrate_speed_scale(&p, 0.0).is_err());
        assert!(calibrate_speed_scale(&p, f64::NAN).is_err());
    }

    #[test]
    fn triangle_starts_and_closes_at_first_vertex() {
        let p = TriangleParams::equilateral(2.0, Vec3::new(0.0, 0.0, 1.0), 0.1, Direction::Ccw)
            .validated()
            .unwrap();
        let start = triangle_ref(0.0, &p);
        assert_abs_diff_eq!(start.pos, p.vertices[0], epsilon = 1e-12);
        let closed = triangle_ref(p.lap_time(), &p);
        assert_abs_diff_eq!(closed.pos, p.vertices[0], epsilon = 1e-9);
    }

    #[test]
    fn triangle_segment_timing() {
        let p = TriangleParams::equilateral(2.0, Vec3::zeros(), 0.1, Direction::Ccw);
        // side 2 m at 0.1 m/s: 20 s per side
        assert_relative_eq!(p.perimeter(), 6.0, epsilon = 1e-12);
        let at_corner = triangle_ref(20.0, &p);
        assert_abs_diff_eq!(at_corner.pos, p.vertices[1], epsilon = 1e-9);
    }

    #[test]
    fn triangle_velocity_matches_finite_difference_between_corners() {
        let p = TriangleParams::equilateral(2.0, Vec3::zeros(), 0.1, Direction::Ccw);
        let h = 1e-6;
        for t in [3.0, 10.0, 27.0, 45.0] {
            let v = triangle_ref(t, &p).vel;
            let fd = (triangle_ref(t + h, &p).pos - triangle_ref(t - h, &p).pos) / (2.0 * h);
            assert!((v - fd).norm() < 1e-6, "t = {t}");
            assert_relative_eq!(v.norm(), 0.1, epsilon = 1e-12);
        }
    }

    #[test]
    fn triangle_direction_reverses_traversal() {
        let ccw = TriangleParams::equilateral(2.0, Vec3::zeros(), 0.1, Direction::Ccw);
        let cw = TriangleParams {
            direction: Direction::Cw,
            ..ccw
        };
        let a = triangle_ref(5.0, &ccw).pos;
        let b = triangle_ref(5.0, &cw).pos;
        assert!((a - b).norm() > 0.1);
        // cw at time t mirrors ccw at lap_time - t
        let mirrored = triangle_ref(ccw.lap_time() - 5.0, &ccw).pos;
        assert_abs_diff_eq!(b, mirrored, epsilon = 1e-9);
    }

    #[test]
    fn triangle_rejects_collinear_vertices() {
        let p = TriangleParams {
            vertices: [
                Vec3::new(0.0, 0.0, 1.0),
                Vec3::new(1.0, 0.0, 1.0),
                Vec3::new(2.0, 0.0, 1.0),
            ],
            speed: 0.1,
            direction: Direction::Ccw,
        };
        assert_eq!(p.validated().unwrap_err().key, "vertices");
    }

    #[test]
    fn metrics_basics() {
        let m = tracking_metrics(&[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(m.mean_e, 0.0);
        assert_eq!(m.max_e, 0.0);
        assert_eq!(m.rmse, 0.0);

        let m = tracking_metrics(&[0.1, 0.1, 0.1]).unwrap();
        assert_relative_eq!(m.mean_e, 0.1, epsilon = 1e-15);
        assert_relative_eq!(m.max_e, 0.1, epsilon = 1e-15);
        assert_relative_eq!(m.rmse, 0.1, epsilon = 1e-15);

        let m = tracking_metrics(&[0.1, 0.3, 0.2]).unwrap();
        assert!(m.mean_e <= m.max_e);
        assert!(m.mean_e <= m.rmse);

        assert_eq!(tracking_metrics(&[]).unwrap_err(), TrajectoryError::EmptyLog);
    }

    #[test]
    fn average_speed_linear_in_scale() {
        let p = LissajousParams::default();
        let double = LissajousParams {
            speed_scale: 2.0,
            ..p
        };
        assert_relative_eq!(double.average_speed(), 2.0 * p.average_speed(), epsilon = 1e-9);
    }
}
