//! Equilibria, lift-coefficient calibration, planar linearization with
//! finite-difference verification, spin-convergence closed forms, and
//! Lyapunov monitors.
//!
//! The closed-loop helpers here integrate the reduced models with the
//! control law evaluated continuously (inside the RK4 stages), which is the
//! regime the stability statements are made in; the full simulator applies
//! zero-order-hold control instead.

use nalgebra::Vector2;
use thiserror::Error;

use crate::control::{height_control_input, omega_z_setpoint, Gains, Reference};
use crate::dynamics::simplified_derivative;
use crate::sim::LogRow;
use crate::types::{ControlInput, State, Vec3, VehicleParams};

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("vehicle is not negatively buoyant (m*g <= f_b); hover spin is undefined")]
    PositiveBuoyancy,
    #[error("no sign change over bracket [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("invalid bracket: {0}")]
    BadBracket(String),
}

/// Hover spin rate: the angular velocity whose wing lift exactly cancels the
/// net negative buoyancy, `ω̄_z = sqrt((m·g - f_b) / k_lift)`.
pub fn hover_omega(params: &VehicleParams) -> Result<f64, AnalysisError> {
    let deficit = params.m * params.g - params.f_b;
    if deficit <= 0.0 {
        return Err(AnalysisError::PositiveBuoyancy);
    }
    Ok((deficit / params.k_lift).sqrt())
}

/// Result of the lift-coefficient bisection.
#[derive(Debug, Clone, Copy)]
pub struct Calibration {
    pub k_lift: f64,
    pub iterations: u32,
    /// Steady-state vertical acceleration at the returned coefficient.
    pub residual: f64,
}

/// Find `k_lift` by bisection on the steady-state vertical acceleration at a
/// fixed spin rate: the returned coefficient makes a vehicle spinning at
/// `omega` hold constant altitude. The acceleration is evaluated through the
/// simplified dynamics, so this calibrates exactly what the simulator flies.
pub fn calibrate_k_lift(
    params: &VehicleParams,
    omega: f64,
    k_lo: f64,
    k_hi: f64,
    k_tol: f64,
) -> Result<Calibration, AnalysisError> {
    if params.net_buoyancy() >= 0.0 {
        return Err(AnalysisError::PositiveBuoyancy);
    }
    if !(k_lo > 0.0 && k_hi > k_lo && k_tol > 0.0) {
        return Err(AnalysisError::BadBracket(format!(
            "need 0 < k_lo < k_hi and k_tol > 0, got [{k_lo}, {k_hi}], tol {k_tol}"
        )));
    }

    let steady_accel = |k: f64| -> f64 {
        let p = VehicleParams { k_lift: k, ..*params };
        let state = State::planar(Vec3::zeros(), 0.0, omega);
        simplified_derivative(&state, ControlInput::ZERO, &p)
            .expect("planar state")
            .dvel
            .z
    };

    let (mut lo, mut hi) = (k_lo, k_hi);
    let f_lo = steady_accel(lo);
    let f_hi = steady_accel(hi);
    if f_lo * f_hi > 0.0 {
        return Err(AnalysisError::NoSignChange { lo, hi });
    }

    let mut iterations = 0u32;
    while hi - lo > k_tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = steady_accel(mid);
        iterations += 1;
        if f_mid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if f_lo * f_mid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let k_lift = 0.5 * (lo + hi);
    Ok(Calibration {
        k_lift,
        iterations,
        residual: steady_accel(k_lift),
    })
}

/// Operating point of the auxiliary planar model used for linearization.
#[derive(Debug, Clone, Copy)]
pub struct OperatingPoint {
    /// Planar force direction angle θ_xy at the operating point (rad).
    pub theta_xy: f64,
    /// Yaw at the operating point (rad).
    pub psi: f64,
    /// Planar speed at the operating point (m/s).
    pub v_xy: f64,
    /// Spin rate at the operating point (rad/s).
    pub psi_dot: f64,
    /// Magnitude of the desired planar force (N).
    pub force_mag: f64,
    /// Planar drag coefficient (N·s²/m²).
    pub drag_coeff: f64,
    /// Vertical lift coefficient of the auxiliary model (N·s²/rad²).
    pub lift_coeff: f64,
}

/// The four first-order partials of the auxiliary planar model.
#[derive(Debug, Clone, Copy)]
pub struct PlanarJacobian {
    pub dxy_dtheta: f64,
    pub dxy_dpsi: f64,
    pub dxy_dv: f64,
    pub dz_dpsidot: f64,
}

/// Nonlinear planar output being linearized:
/// `|F|·(sin θ·cos ψ + cos θ·sin ψ) - K_D·v²`.
pub fn planar_output(op: &OperatingPoint, theta: f64, psi: f64, v: f64) -> f64 {
    op.force_mag * (theta.sin() * psi.cos() + theta.cos() * psi.sin()) - op.drag_coeff * v * v
}

/// Nonlinear vertical output being linearized: `2·k_F·ψ̇² + net_buoyancy`.
/// The buoyancy offset is constant, so it drops out of every derivative.
pub fn vertical_output(op: &OperatingPoint, psi_dot: f64, net_buoyancy: f64) -> f64 {
    2.0 * op.lift_coeff * psi_dot * psi_dot + net_buoyancy
}

/// Analytic linearization of the auxiliary planar model about `op`.
pub fn linearize_planar(op: &OperatingPoint) -> PlanarJacobian {
    let (st, ct) = op.theta_xy.sin_cos();
    let (sp, cp) = op.psi.sin_cos();
    PlanarJacobian {
        dxy_dtheta: op.force_mag * (ct * cp - st * sp),
        dxy_dpsi: op.force_mag * (-st * sp + ct * cp),
        dxy_dv: -2.0 * op.drag_coeff * op.v_xy,
        dz_dpsidot: 4.0 * op.lift_coeff * op.psi_dot,
    }
}

fn relative_error(fd: f64, exact: f64) -> f64 {
    let diff = (fd - exact).abs();
    if exact.abs() > 1e-12 {
        diff / exact.abs()
    } else {
        diff
    }
}

/// Verify [`linearize_planar`] against central finite differences of the
/// nonlinear outputs with step `h`; returns the maximum relative error over
/// the four partials.
pub fn finite_difference_check(op: &OperatingPoint, h: f64) -> f64 {
    let jac = linearize_planar(op);
    let fd_theta = (planar_output(op, op.theta_xy + h, op.psi, op.v_xy)
        - planar_output(op, op.theta_xy - h, op.psi, op.v_xy))
        / (2.0 * h);
    let fd_psi = (planar_output(op, op.theta_xy, op.psi + h, op.v_xy)
        - planar_output(op, op.theta_xy, op.psi - h, op.v_xy))
        / (2.0 * h);
    let fd_v = (planar_output(op, op.theta_xy, op.psi, op.v_xy + h)
        - planar_output(op, op.theta_xy, op.psi, op.v_xy - h))
        / (2.0 * h);
    let fd_psidot = (vertical_output(op, op.psi_dot + h, 0.0)
        - vertical_output(op, op.psi_dot - h, 0.0))
        / (2.0 * h);

    relative_error(fd_theta, jac.dxy_dtheta)
        .max(relative_error(fd_psi, jac.dxy_dpsi))
        .max(relative_error(fd_v, jac.dxy_dv))
        .max(relative_error(fd_psidot, jac.dz_dpsidot))
}

/// Observed convergence order of the central difference on the θ-partial,
/// measured between steps `h` and `h/2` (expected: 2, the truncation order).
pub fn fd_convergence_order(op: &OperatingPoint, h: f64) -> f64 {
    let exact = linearize_planar(op).dxy_dtheta;
    let fd = |step: f64| {
        (planar_output(op, op.theta_xy + step, op.psi, op.v_xy)
            - planar_output(op, op.theta_xy - step, op.psi, op.v_xy))
            / (2.0 * step)
    };
    let e1 = (fd(h) - exact).abs();
    let e2 = (fd(h / 2.0) - exact).abs();
    (e1 / e2).log2()
}

/// Random operating point with every partial bounded away from zero:
/// `|θ + ψ| < pi/2` keeps the trig partials non-degenerate, and speeds and
/// coefficients stay strictly positive.
pub fn random_operating_point<R: rand::Rng>(rng: &mut R) -> OperatingPoint {
    OperatingPoint {
        theta_xy: rng.random_range(-0.7..0.7),
        psi: rng.random_range(-0.7..0.7),
        v_xy: rng.random_range(0.1..1.0),
        psi_dot: rng.random_range(1.0..20.0),
        force_mag: rng.random_range(0.5..2.0),
        drag_coeff: rng.random_range(0.05..0.5),
        lift_coeff: rng.random_range(0.001..0.05),
    }
}

/// Closed-form spin response under the height-loop input with a constant
/// setpoint: `ω(t) = ω* + (ω₀ - ω*)·exp(-2·k·l_m·t / I_z)`.
pub fn omega_convergence_analytic(
    t: f64,
    omega0: f64,
    omega_star: f64,
    k: f64,
    l_m: f64,
    i_z: f64,
) -> f64 {
    omega_star + (omega0 - omega_star) * (-2.0 * k * l_m * t / i_z).exp()
}

/// Lyapunov candidate for the height loop and its derivative along the
/// closed-loop error dynamics: `V = K_p·e²/2 + m·ė²/2`,
/// `V̇ = -K_d·ė² - d_z·ė²·|ė|`.
#[derive(Debug, Clone, Copy)]
pub struct LyapunovZ {
    pub v: f64,
    pub v_dot: f64,
}

pub fn lyapunov_z(e_z: f64, de_z: f64, params: &VehicleParams, gains: &Gains) -> LyapunovZ {
    LyapunovZ {
        v: 0.5 * gains.k_p * e_z * e_z + 0.5 * params.m * de_z * de_z,
        v_dot: -gains.k_d * de_z * de_z - params.d_z * de_z * de_z * de_z.abs(),
    }
}

/// Lyapunov candidate for planar tracking: `V = ‖e‖²/2 + ‖ė‖²/2`.
pub fn lyapunov_xy(e_xy: Vector2<f64>, de_xy: Vector2<f64>) -> f64 {
    0.5 * e_xy.norm_squared() + 0.5 * de_xy.norm_squared()
}

/// Spin-rate trajectory of the closed ω_z loop.
#[derive(Debug, Clone)]
pub struct SpinTrace {
    /// `(t, ω_z)` at every step, including both endpoints.
    pub samples: Vec<(f64, f64)>,
    /// Whether the motor command ever left `[0, f_max]` (clamping engaged).
    pub saturated: bool,
}

/// Integrate the spin closed loop `ω̇_z = (l_m·Σf - d_w·ω|ω|)/I_z` with the
/// height-loop input evaluated continuously at a fixed setpoint. In the
/// unclamped regime with `ω ≥ 0` this reduces exactly to the first-order law
/// `ω̇ = (2·k·l_m/I_z)·(ω* - ω)` checked by [`omega_convergence_analytic`].
pub fn simulate_spin_closed_loop(
    omega0: f64,
    omega_star: f64,
    params: &VehicleParams,
    gains: &Gains,
    dt: f64,
    duration: f64,
) -> SpinTrace {
    let mut saturated = false;
    let mut deriv = |w: f64| -> f64 {
        let raw = gains.k * (omega_star - w) + params.d_w * w * w / (2.0 * params.l_m);
        if raw < 0.0 || raw > params.f_max {
            saturated = true;
        }
        let u = height_control_input(w, omega_star, params, gains);
        let state = State::planar(Vec3::zeros(), 0.0, w);
        simplified_derivative(&state, u, params)
            .expect("planar state")
            .domega
            .z
    };

    let n = (duration / dt).round().max(1.0) as usize;
    let mut samples = Vec::with_capacity(n + 1);
    let mut w = omega0;
    samples.push((0.0, w));
    for step in 0..n {
        let k1 = deriv(w);
        let k2 = deriv(w + 0.5 * dt * k1);
        let k3 = deriv(w + 0.5 * dt * k2);
        let k4 = deriv(w + dt * k3);
        w += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        samples.push(((step + 1) as f64 * dt, w));
    }
    SpinTrace { samples, saturated }
}

/// One sample of the reduced height closed loop.
#[derive(Debug, Clone, Copy)]
pub struct ZSample {
    pub t: f64,
    pub z: f64,
    pub dz: f64,
    pub v: f64,
    pub v_dot: f64,
}

#[derive(Debug, Clone)]
pub struct ZTrace {
    pub samples: Vec<ZSample>,
    /// Whether the spin setpoint ever clamped at zero (descent saturation).
    pub saturated: bool,
}

/// Integrate the reduced height closed loop `m·z̈ = f_b - m·g - d_z·ż|ż|
/// + k_lift·ω*²(z, ż)` with the setpoint law evaluated continuously —
/// the regime in which `V̇ = -K_d·ė² - d_z·ė²|ė|` holds exactly.
pub fn simulate_z_closed_loop(
    z0: f64,
    dz0: f64,
    z_d: f64,
    params: &VehicleParams,
    gains: &Gains,
    dt: f64,
    duration: f64,
) -> ZTrace {
    let reference = Reference::hold(Vec3::new(0.0, 0.0, z_d));
    let mut saturated = false;
    let mut accel = |z: f64, dz: f64| -> f64 {
        let sp = omega_z_setpoint(z, dz, &reference, params, gains);
        saturated |= sp.descent_saturated;
        (params.net_buoyancy() - params.d_z * dz * dz.abs()
            + params.k_lift * sp.omega * sp.omega)
            / params.m
    };

    let n = (duration / dt).round().max(1.0) as usize;
    let mut samples = Vec::with_capacity(n + 1);
    let (mut z, mut dz) = (z0, dz0);
    let sample = |t: f64, z: f64, dz: f64, params: &VehicleParams, gains: &Gains| {
        let lyap = lyapunov_z(z_d - z, -dz, params, gains);
        ZSample {
            t,
            z,
            dz,
            v: lyap.v,
            v_dot: lyap.v_dot,
        }
    };
    samples.push(sample(0.0, z, dz, params, gains));
    for step in 0..n {
        let (k1z, k1v) = (dz, accel(z, dz));
        let (k2z, k2v) = (dz + 0.5 * dt * k1v, accel(z + 0.5 * dt * k1z, dz + 0.5 * dt * k1v));
        let (k3z, k3v) = (dz + 0.5 * dt * k2v, accel(z + 0.5 * dt * k2z, dz + 0.5 * dt * k2v));
        let (k4z, k4v) = (dz + dt * k3v, accel(z + dt * k3z, dz + dt * k3v));
        z += dt / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
        dz += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        samples.push(sample((step + 1) as f64 * dt, z, dz, params, gains));
    }
    ZTrace { samples, saturated }
}

/// Ultimate-boundedness summary of the planar Lyapunov monitor over a run.
#[derive(Debug, Clone, Copy)]
pub struct UubReport {
    pub v_initial: f64,
    pub v_max: f64,
    /// sup of V over the trailing 20% of the run.
    pub ultimate_bound: f64,
    /// sup of V over the 60-80% window, for trend comparison.
    pub prev_window_bound: f64,
}

/// Summarize the `lyapunov_xy` column of a log. `None` if no row carries a
/// finite value.
pub fn xy_uub_report(rows: &[LogRow]) -> Option<UubReport> {
    let series: Vec<f64> = rows
        .iter()
        .map(|r| r.lyapunov_xy)
        .filter(|v| v.is_finite())
        .collect();
    if series.is_empty() {
        return None;
    }
    let max_of = |s: &[f64]| s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let n = series.len();
    let tail = &series[(n * 4) / 5..];
    let prev = &series[(n * 3) / 5..(n * 4) / 5];
    Some(UubReport {
        v_initial: series[0],
        v_max: max_of(&series),
        ultimate_bound: max_of(tail),
        prev_window_bound: if prev.is_empty() {
            f64::NAN
        } else {
            max_of(prev)
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    fn params() -> VehicleParams {
        VehicleParams::defaults().validated().unwrap()
    }

    #[test]
    fn hover_omega_paper_defaults() {
        assert_relative_eq!(hover_omega(&params()).unwrap(), 10.0, epsilon = 1e-9);
    }

    #[test]
    fn hover_omega_quarter_with_quadruple_lift() {
        let p = VehicleParams {
            k_lift: 4.0 * 4.905e-4,
            ..params()
        };
        assert_relative_eq!(hover_omega(&p).unwrap(), 5.0, epsilon = 1e-9);
    }

    #[test]
    fn hover_omega_rejects_positive_buoyancy() {
        let p = VehicleParams {
            f_b: 1.0,
            ..params()
        };
        assert_eq!(hover_omega(&p).unwrap_err(), AnalysisError::PositiveBuoyancy);
    }

    #[test]
    fn hover_spin_zeroes_vertical_acceleration() {
        let p = params();
        let omega_bar = hover_omega(&p).unwrap();
        let state = State::planar(Vec3::zeros(), 0.0, omega_bar);
        let dot = simplified_derivative(&state, ControlInput::ZERO, &p).unwrap();
        assert_abs_diff_eq!(dot.dvel.z, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn calibration_recovers_closed_form() {
        let p = params();
        let cal = calibrate_k_lift(&p, 10.0, 1e-5, 1e-2, 1e-13).unwrap();
        let closed_form = (p.m * p.g - p.f_b) / 100.0;
        assert_abs_diff_eq!(cal.k_lift, closed_form, epsilon = 1e-9);
        assert!(cal.residual.abs() < 1e-8, "residual {}", cal.residual);
    }

    #[test]
    fn calibration_iteration_bound() {
        let p = params();
        let (lo, hi, tol) = (1e-5, 1e-2, 1e-10);
        let cal = calibrate_k_lift(&p, 10.0, lo, hi, tol).unwrap();
        let bound = ((hi - lo) / tol).log2().ceil() as u32;
        assert!(
            cal.iterations <= bound,
            "{} iterations exceeds bisection bound {}",
            cal.iterations,
            bound
        );
    }

    #[test]
    fn calibration_requires_sign_change() {
        let p = params();
        // bracket entirely above the root: always positive acceleration
        let err = calibrate_k_lift(&p, 10.0, 1e-3, 1e-2, 1e-12).unwrap_err();
        assert!(matches!(err, AnalysisError::NoSignChange { .. }));
    }

    #[test]
    fn calibration_rejects_neutral_vehicle() {
        let p = VehicleParams {
            f_b: 0.065 * 9.81,
            ..params()
        };
        assert_eq!(
            calibrate_k_lift(&p, 10.0, 1e-5, 1e-2, 1e-12).unwrap_err(),
            AnalysisError::PositiveBuoyancy
        );
    }

    #[test]
    fn linearization_arithmetic_examples() {
        let op = OperatingPoint {
            theta_xy: 0.0,
            psi: 0.0,
            v_xy: 0.5,
            psi_dot: 10.0,
            force_mag: 1.0,
            drag_coeff: 0.2,
            lift_coeff: 0.01,
        };
        let jac = linearize_planar(&op);
        assert_relative_eq!(jac.dz_dpsidot, 0.4, epsilon = 1e-15);
        assert_relative_eq!(jac.dxy_dv, -0.2, epsilon = 1e-15);
        assert_relative_eq!(jac.dxy_dtheta, 1.0, epsilon = 1e-15);
        assert_relative_eq!(jac.dxy_dpsi, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn finite_difference_matches_analytic() {
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        for _ in 0..200 {
            let op = random_operating_point(&mut rng);
            let err = finite_difference_check(&op, 1e-6);
            assert!(err < 1e-6, "relative error {err} at {op:?}");
        }
    }

    #[test]
    fn finite_difference_error_scales_quadratically() {
        let op = OperatingPoint {
            theta_xy: 0.3,
            psi: 0.2,
            v_xy: 0.5,
            psi_dot: 10.0,
            force_mag: 1.0,
            drag_coeff: 0.2,
            lift_coeff: 0.01,
        };
        let order = fd_convergence_order(&op, 1e-2);
        assert!(
            (order - 2.0).abs() < 0.1,
            "observed order {order}, expected 2"
        );
    }

    #[test]
    fn finite_difference_exact_at_origin() {
        let op = OperatingPoint {
            theta_xy: 0.0,
            psi: 0.0,
            v_xy: 0.0,
            psi_dot: 0.0,
            force_mag: 1.0,
            drag_coeff: 0.2,
            lift_coeff: 0.01,
        };
        // quadratic terms differentiate exactly; trig truncation is ~h²/6
        assert!(finite_difference_check(&op, 1e-6) < 1e-12);
    }

    #[test]
    fn omega_convergence_endpoints() {
        let (w0, ws) = (3.0, 9.0);
        let (k, l, iz) = (0.02, 0.35, 3.5e-3);
        assert_eq!(omega_convergence_analytic(0.0, w0, ws, k, l, iz), w0);
        assert_relative_eq!(
            omega_convergence_analytic(1e6, w0, ws, k, l, iz),
            ws,
            epsilon = 1e-12
        );
        let half_life = (2.0f64).ln() * iz / (2.0 * k * l);
        assert_relative_eq!(
            omega_convergence_analytic(half_life, w0, ws, k, l, iz),
            0.5 * (w0 + ws),
            epsilon = 1e-12
        );
    }

    #[test]
    fn spin_closed_loop_matches_exponential() {
        let p = params();
        let gains = Gains {
            k: 0.01,
            ..Gains::default()
        };
        let time_constant = p.inertia.z / (2.0 * gains.k * p.l_m);
        let trace = simulate_spin_closed_loop(5.0, 10.0, &p, &gains, 1e-3, 5.0 * time_constant);
        assert!(!trace.saturated, "expected the unclamped regime");
        for &(t, w) in &trace.samples {
            let analytic = omega_convergence_analytic(t, 5.0, 10.0, gains.k, p.l_m, p.inertia.z);
            assert!(
                ((w - analytic) / analytic).abs() < 1e-6,
                "t = {t}: simulated {w} vs analytic {analytic}"
            );
        }
    }

    #[test]
    fn lyapunov_z_values() {
        let p = params();
        let g = Gains::default();
        let at_rest = lyapunov_z(0.0, 0.0, &p, &g);
        assert_eq!(at_rest.v, 0.0);
        assert_eq!(at_rest.v_dot, 0.0);
        let offset = lyapunov_z(1.0, 0.0, &p, &g);
        assert_relative_eq!(offset.v, 0.5 * g.k_p, epsilon = 1e-15);
        assert_eq!(offset.v_dot, 0.0);
    }

    #[test]
    fn lyapunov_xy_values() {
        assert_eq!(lyapunov_xy(Vector2::zeros(), Vector2::zeros()), 0.0);
        assert_relative_eq!(
            lyapunov_xy(Vector2::new(3.0, 4.0), Vector2::zeros()),
            12.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn z_closed_loop_descends_v_and_matches_vdot() {
        let p = params();
        let g = Gains::default();
        let dt = 1e-3;
        let trace = simulate_z_closed_loop(0.0, 0.0, 1.0, &p, &g, dt, 10.0);
        assert!(!trace.saturated);
        let s = &trace.samples;
        for w in s.windows(2) {
            assert!(w[1].v <= w[0].v + 1e-6, "V increased at t = {}", w[1].t);
        }
        // central-difference dV/dt against the closed form
        for i in 1..s.len() - 1 {
            let numeric = (s[i + 1].v - s[i - 1].v) / (s[i + 1].t - s[i - 1].t);
            assert!(
                (numeric - s[i].v_dot).abs() < 1e-4,
                "t = {}: numeric {} vs formula {}",
                s[i].t,
                numeric,
                s[i].v_dot
            );
        }
        // converges to the setpoint
        let last = s.last().unwrap();
        assert!((last.z - 1.0).abs() < 1e-3);
    }

    #[test]
    fn uub_report_empty_when_no_monitor() {
        assert!(xy_uub_report(&[]).is_none());
    }
}
