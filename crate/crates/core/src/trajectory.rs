//! Monte-Carlo simulation of the conditioned Gaussian state and measurement
//! record: Euler–Maruyama (Ito) integration of the joint truth/filter system,
//! deterministic Riccati covariance tracks, unconditional (Lindblad) moment
//! evolution, and the three-stage preparation–evolution–verification
//! experiment.

use rayon::prelude::*;

use crate::conditional::{
    back_action_diffusion, conditional_covariance_with_noise, riccati_steady_state_general,
};
use crate::consts::HBAR;
use crate::params::{GaussianState, MeasurementParams, MechanicalParams};
use crate::rng::WienerSource;
use crate::verification::tomography_error;
use crate::{Error, Result};

/// One realization of the conditioned dynamics. The covariance track is
/// measurement-independent and identical across trajectories; the means and
/// the record differ per seed/index.
#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub index: u64,
    pub seed: u64,
    /// Stored sample times (decimated by `stride`), s.
    pub t: Vec<f64>,
    /// Measurement-record increment accumulated since the previous stored
    /// sample.
    pub dy: Vec<f64>,
    /// Conditional means.
    pub mean_x: Vec<f64>,
    pub mean_p: Vec<f64>,
    /// Simulation-frame true state (for ensemble diagnostics).
    pub truth_x: Vec<f64>,
    pub truth_p: Vec<f64>,
    /// Conditional covariance track.
    pub v_xx: Vec<f64>,
    pub v_xp: Vec<f64>,
    pub v_pp: Vec<f64>,
}

/// Ensemble run configuration.
#[derive(Debug, Clone)]
pub struct TrajectoryConfig {
    pub duration: f64,
    pub dt: f64,
    pub seed: u64,
    pub n_traj: usize,
    /// Store every `stride`-th step (≥ 1).
    pub stride: usize,
    /// Deterministic initial conditional mean.
    pub initial_mean: (f64, f64),
    /// Initial conditional covariance; defaults to the steady state.
    pub initial_cov: Option<(f64, f64, f64)>,
    /// Diagnostic mode: force every Wiener increment to zero.
    pub zero_noise: bool,
}

impl TrajectoryConfig {
    pub fn new(duration: f64, dt: f64, seed: u64, n_traj: usize) -> Self {
        Self {
            duration,
            dt,
            seed,
            n_traj,
            stride: 1,
            initial_mean: (0.0, 0.0),
            initial_cov: None,
            zero_noise: false,
        }
    }
}

/// White-noise intensities of the measurement model.
#[derive(Debug, Clone, Copy)]
struct NoiseModel {
    alpha: f64,
    /// Momentum kick intensities per √dt.
    ba_kick: f64,
    force_kick: f64,
    /// Sensing contribution to dy per √dt.
    sense_kick: f64,
    /// Record noise intensity: Var(dy noise) = r_y·dt.
    r_y: f64,
    /// Riccati inputs.
    q_diff: f64,
    r_sens: f64,
}

fn noise_model(mech: &MechanicalParams, meas: &MeasurementParams) -> NoiseModel {
    let m = mech.mass;
    let oq = meas.omega_q;
    let alpha = oq * (m / HBAR).sqrt();
    let s_ba = HBAR * m * oq * oq;
    let s_nf = if meas.omega_f > 0.0 { 2.0 * HBAR * m * meas.omega_f * meas.omega_f } else { 0.0 };
    let s_nx = if meas.omega_x.is_finite() {
        2.0 * HBAR / (m * meas.omega_x * meas.omega_x)
    } else {
        0.0
    };
    let r_y = 0.5 * (1.0 + alpha * alpha * s_nx);
    NoiseModel {
        alpha,
        ba_kick: (0.5 * s_ba).sqrt(),
        force_kick: (0.5 * s_nf).sqrt(),
        sense_kick: alpha * (0.5 * s_nx).sqrt(),
        r_y,
        q_diff: 0.5 * (s_ba + s_nf),
        r_sens: r_y / (alpha * alpha),
    }
}

/// Deterministic conditional-covariance track on the simulation grid
/// (classical RK4 on the Riccati equations; identical for every trajectory).
fn covariance_track(
    mech: &MechanicalParams,
    model: &NoiseModel,
    v0: (f64, f64, f64),
    steps: usize,
    dt: f64,
) -> Vec<(f64, f64, f64)> {
    let m = mech.mass;
    let w2 = mech.omega_m * mech.omega_m;
    let rhs = |v: (f64, f64, f64)| {
        (
            2.0 * v.1 / m - v.0 * v.0 / model.r_sens,
            v.2 / m - m * w2 * v.0 - v.0 * v.1 / model.r_sens,
            -2.0 * m * w2 * v.1 + model.q_diff - v.1 * v.1 / model.r_sens,
        )
    };
    let add = |a: (f64, f64, f64), b: (f64, f64, f64), s: f64| {
        (a.0 + s * b.0, a.1 + s * b.1, a.2 + s * b.2)
    };
    let mut track = Vec::with_capacity(steps + 1);
    let mut v = v0;
    track.push(v);
    for _ in 0..steps {
        let k1 = rhs(v);
        let k2 = rhs(add(v, k1, 0.5 * dt));
        let k3 = rhs(add(v, k2, 0.5 * dt));
        let k4 = rhs(add(v, k3, dt));
        v = (
            v.0 + dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
            v.1 + dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
            v.2 + dt / 6.0 * (k1.2 + 2.0 * k2.2 + 2.0 * k3.2 + k4.2),
        );
        track.push(v);
    }
    track
}

/// Simulate an ensemble of conditioned trajectories.
///
/// Each trajectory integrates the true state driven by quantum back-action
/// and classical force noise, the measurement record
/// `dy = αx dt + α n_x dt + dW/√2`, and the Kalman conditional means driven
/// by the innovations. Trajectories are keyed by `(seed, index)` and are
/// scheduling-order independent.
pub fn simulate_conditional(
    mech: &MechanicalParams,
    meas: &MeasurementParams,
    config: &TrajectoryConfig,
) -> Result<Vec<TrajectoryRecord>> {
    let op = "simulate_conditional";
    if config.n_traj == 0 {
        return Err(Error::domain(op, "need at least one trajectory"));
    }
    let rate = meas.omega_q.max(mech.omega_m);
    let dt_max = 0.01 / rate;
    if config.dt > dt_max {
        return Err(Error::domain(
            op,
            format!("dt = {:e} exceeds stability bound 0.01/max(omega_m, omega_q) = {dt_max:e}", config.dt),
        ));
    }
    let model = noise_model(mech, meas);
    let steps = (config.duration / config.dt).round() as usize;
    if steps == 0 {
        return Err(Error::domain(op, "duration shorter than one step"));
    }
    let v0 = match config.initial_cov {
        Some(v) => v,
        None => riccati_steady_state_general(mech.mass, mech.omega_m, model.q_diff, model.r_sens)?,
    };
    let track = covariance_track(mech, &model, v0, steps, config.dt);
    let stride = config.stride.max(1);
    let m = mech.mass;
    let w2 = mech.omega_m * mech.omega_m;
    let dt = config.dt;
    let source = WienerSource::new(config.seed, dt);

    let records: Vec<TrajectoryRecord> = (0..config.n_traj as u64)
        .into_par_iter()
        .map(|traj| {
            // Truth starts from the conditional distribution around the
            // initial mean; the filter starts at the mean itself.
            let (mut x, mut p) = if config.zero_noise {
                config.initial_mean
            } else {
                let (sx, sp, corr) = sample_from_cov(v0);
                let g1 = crate::rng::standard_normal(config.seed, traj, u64::MAX, 10);
                let g2 = crate::rng::standard_normal(config.seed, traj, u64::MAX, 11);
                (
                    config.initial_mean.0 + sx * g1,
                    config.initial_mean.1 + sp * (corr * g1 + (1.0 - corr * corr).sqrt() * g2),
                )
            };
            let (mut xh, mut ph) = config.initial_mean;
            let n_stored = steps / stride + 1;
            let mut rec = TrajectoryRecord {
                index: traj,
                seed: config.seed,
                t: Vec::with_capacity(n_stored),
                dy: Vec::with_capacity(n_stored),
                mean_x: Vec::with_capacity(n_stored),
                mean_p: Vec::with_capacity(n_stored),
                truth_x: Vec::with_capacity(n_stored),
                truth_p: Vec::with_capacity(n_stored),
                v_xx: Vec::with_capacity(n_stored),
                v_xp: Vec::with_capacity(n_stored),
                v_pp: Vec::with_capacity(n_stored),
            };
            let mut store = |k: usize, dy_acc: f64, x: f64, p: f64, xh: f64, ph: f64| {
                let v = track[k];
                rec.t.push(k as f64 * dt);
                rec.dy.push(dy_acc);
                rec.mean_x.push(xh);
                rec.mean_p.push(ph);
                rec.truth_x.push(x);
                rec.truth_p.push(p);
                rec.v_xx.push(v.0);
                rec.v_xp.push(v.1);
                rec.v_pp.push(v.2);
            };
            store(0, 0.0, x, p, xh, ph);
            let mut dy_acc = 0.0;
            for k in 0..steps {
                let (dw_shot, dw_ba, dw_f, dw_x) = if config.zero_noise {
                    (0.0, 0.0, 0.0, 0.0)
                } else {
                    (
                        source.increment(traj, k as u64, 0),
                        source.increment(traj, k as u64, 1),
                        source.increment(traj, k as u64, 2),
                        source.increment(traj, k as u64, 3),
                    )
                };
                // Record increment.
                let dy = model.alpha * x * dt
                    + dw_shot / 2f64.sqrt()
                    + model.sense_kick * dw_x;
                // Truth (Euler-Maruyama, Ito convention).
                let (x_old, p_old) = (x, p);
                x = x_old + p_old / m * dt;
                p = p_old - m * w2 * x_old * dt + model.ba_kick * dw_ba + model.force_kick * dw_f;
                // Filter update with the transient Kalman gain.
                let v = track[k];
                let innovation = dy - model.alpha * xh * dt;
                let kx = model.alpha * v.0 / model.r_y;
                let kp = model.alpha * v.1 / model.r_y;
                let (xh_old, ph_old) = (xh, ph);
                xh = xh_old + ph_old / m * dt + kx * innovation;
                ph = ph_old - m * w2 * xh_old * dt + kp * innovation;
                dy_acc += dy;
                if (k + 1) % stride == 0 {
                    store(k + 1, dy_acc, x, p, xh, ph);
                    dy_acc = 0.0;
                }
            }
            rec
        })
        .collect();
    Ok(records)
}

fn sample_from_cov(v: (f64, f64, f64)) -> (f64, f64, f64) {
    let sx = v.0.sqrt();
    let sp = v.2.sqrt();
    let corr = if sx > 0.0 && sp > 0.0 { v.1 / (sx * sp) } else { 0.0 };
    (sx, sp, corr.clamp(-1.0, 1.0))
}

/// Unconditional (Lindblad) evolution of a Gaussian state under position
/// measurement whose record is discarded, plus optional extra white force
/// noise. Closed form: symplectic rotation plus momentum diffusion
/// `D = ħMΩ_q²/2 + S_extra/2`.
pub fn unconditional_evolve(
    mech: &MechanicalParams,
    omega_q: f64,
    extra_force_psd: f64,
    initial: &GaussianState,
    duration: f64,
) -> GaussianState {
    let d = back_action_diffusion(mech.mass, omega_q) + 0.5 * extra_force_psd;
    propagate_with_diffusion(mech, d, initial, duration)
}

/// Rotation of means/covariance at frequency ω_m with momentum diffusion D.
pub fn propagate_with_diffusion(
    mech: &MechanicalParams,
    d_pp: f64,
    initial: &GaussianState,
    t: f64,
) -> GaussianState {
    let m = mech.mass;
    let w = mech.omega_m;
    let (v_xx, v_xp, v_pp) = (initial.v_xx, initial.v_xp, initial.v_pp);
    if w * t.abs() < 1e-4 {
        // Free-mass / short-time expansion (exact at w = 0).
        let mean_x = initial.mean_x + initial.mean_p / m * t
            - 0.5 * w * w * initial.mean_x * t * t;
        let mean_p = initial.mean_p - m * w * w * initial.mean_x * t;
        let q_xx = d_pp * t * t * t / (3.0 * m * m);
        let q_xp = d_pp * t * t / (2.0 * m);
        let q_pp = d_pp * t;
        return GaussianState {
            mean_x,
            mean_p,
            v_xx: v_xx + 2.0 * t * v_xp / m + t * t * v_pp / (m * m) + q_xx,
            v_xp: v_xp + t * v_pp / m + q_xp,
            v_pp: v_pp + q_pp,
        };
    }
    let (c, s) = ((w * t).cos(), (w * t).sin());
    let n = m * w;
    let q_xx = d_pp * (0.5 * t - (2.0 * w * t).sin() / (4.0 * w)) / (n * n);
    let q_xp = d_pp * s * s / (2.0 * m * w * w);
    let q_pp = d_pp * (0.5 * t + (2.0 * w * t).sin() / (4.0 * w));
    GaussianState {
        mean_x: initial.mean_x * c + initial.mean_p * s / n,
        mean_p: -n * initial.mean_x * s + initial.mean_p * c,
        v_xx: c * c * v_xx + 2.0 * c * s * v_xp / n + s * s * v_pp / (n * n) + q_xx,
        v_xp: -n * c * s * v_xx + (c * c - s * s) * v_xp + c * s * v_pp / n + q_xp,
        v_pp: n * n * s * s * v_xx - 2.0 * n * c * s * v_xp + c * c * v_pp + q_pp,
    }
}

/// Stage parameters of the preparation–evolution–verification experiment,
/// specified as multiples of √(Ω_x Ω_F).
#[derive(Debug, Clone, Copy)]
pub struct ThreeStageParams {
    /// Preparation measurement strength Ω_q (rad/s).
    pub prep_omega_q: f64,
    /// Optical-spring frequency ω_opt during evolution (rad/s).
    pub evolve_omega_opt: f64,
    /// Verification measurement strength Ω_q′ (rad/s).
    pub verify_omega_q: f64,
    /// Squeezing injected during verification.
    pub verify_squeeze_q: f64,
    /// Classical noise corners shared by all stages.
    pub omega_f: f64,
    pub omega_x: f64,
}

/// Verified position-uncertainty curve of the three-stage experiment.
#[derive(Debug, Clone)]
pub struct BreathingCurve {
    /// Evolution times τ_e, s.
    pub tau: Vec<f64>,
    /// Verified Δx_total(τ_e), m.
    pub delta_x: Vec<f64>,
    /// Zero-point Δx of the ω_opt oscillator, m.
    pub delta_x_vacuum: f64,
    /// Number of maximal intervals with Δx below vacuum.
    pub dip_count: usize,
    /// Δx(0) below vacuum (position-squeezed preparation).
    pub below_vacuum_at_start: bool,
}

/// Run the three-stage experiment: prepare a conditional state at
/// `prep_omega_q`, evolve it under the optical spring with thermal force
/// diffusion (back-action removed by monitoring the out-going amplitude
/// quadrature), and add the verification tomography error.
pub fn three_stage_experiment(
    mech: &MechanicalParams,
    stages: &ThreeStageParams,
    tau_max: f64,
    n_points: usize,
) -> Result<BreathingCurve> {
    let op = "three_stage_experiment";
    if !(stages.prep_omega_q > 0.0)
        || !(stages.evolve_omega_opt > 0.0)
        || !(stages.verify_omega_q > 0.0)
    {
        return Err(Error::domain(op, "missing stage parameters"));
    }
    let prep_meas = MeasurementParams::new(stages.prep_omega_q, std::f64::consts::FRAC_PI_2)?
        .with_classical_noise(stages.omega_f, stages.omega_x)?;
    let prep = conditional_covariance_with_noise(mech, &prep_meas)?;
    let verify_meas = MeasurementParams::new(stages.verify_omega_q, std::f64::consts::FRAC_PI_2)?
        .with_classical_noise(stages.omega_f, stages.omega_x)?
        .with_squeezing(stages.verify_squeeze_q, 0.0)?;
    let v_add = tomography_error(mech, &verify_meas)?;

    // Evolution-stage thermal diffusion with back-action excluded: V_pp
    // grows by 2ħMΩ_F²·t (the full single-sided S_nF as rate).
    let d_pp = 2.0 * HBAR * mech.mass * stages.omega_f * stages.omega_f;
    let spring = MechanicalParams {
        omega_m: stages.evolve_omega_opt,
        ..*mech
    };
    let initial = GaussianState {
        mean_x: 0.0,
        mean_p: 0.0,
        v_xx: prep.v_xx,
        v_xp: prep.v_xp,
        v_pp: prep.v_pp,
    };
    let vac = (HBAR / (2.0 * mech.mass * stages.evolve_omega_opt)).sqrt();
    let mut tau = Vec::with_capacity(n_points);
    let mut delta_x = Vec::with_capacity(n_points);
    for k in 0..n_points {
        let t = tau_max * k as f64 / (n_points - 1) as f64;
        let evolved = propagate_with_diffusion(&spring, d_pp, &initial, t);
        tau.push(t);
        delta_x.push((evolved.v_xx + v_add.v_xx).sqrt());
    }
    let mut dip_count = 0;
    let mut inside = false;
    for &dx in &delta_x {
        let below = dx < vac;
        if below && !inside {
            dip_count += 1;
        }
        inside = below;
    }
    Ok(BreathingCurve {
        below_vacuum_at_start: delta_x[0] < vac,
        tau,
        delta_x,
        delta_x_vacuum: vac,
        dip_count,
    })
}
