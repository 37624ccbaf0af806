//! State-tomography error budgets: the additive noise ellipse of
//! back-action-evaded verification, the BAE filter constraint, steering
//! measures, and the universal mirror–light entanglement.

use crate::consts::HBAR;
use crate::params::{MeasurementParams, MechanicalParams};
use crate::{Error, Result};

/// Additive tomography noise ellipse and its sub-Heisenberg verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TomographyError {
    pub v_xx: f64,
    pub v_xp: f64,
    pub v_pp: f64,
    /// det(V_add)/(ħ²/4) = (Ω_F/Ω_x)² + (e^{-2q}/2)(Ω_F/Ω_q)².
    pub det_ratio: f64,
    /// True when det(V_add) < ħ²/4.
    pub sub_heisenberg: bool,
    /// Set when Ω_q < 10 ω_m; the ellipse shape formulas assume Ω_q ≫ ω_m
    /// (the determinant is valid for all ω_m).
    pub regime_warning: bool,
}

/// Optimized back-action-evading tomography error with white classical noise
/// and input squeezing:
///
/// ```text
/// V_xx^add = (ħ/√2MΩ_q)·Λ_x^{3/2} ξ_F^{1/2}     Λ_x = √(ξ_x² + e^{-2q}/2)
/// V_xp^add = −(ħ/2)·Λ_x ξ_F                      ξ_F = Ω_F/Ω_q, ξ_x = Ω_q/Ω_x
/// V_pp^add = (ħMΩ_q/√2)·Λ_x^{1/2} ξ_F^{3/2}
/// ```
///
/// so that `det(V_add)/(ħ²/4) = Λ_x²ξ_F²` identically. Vanishes exactly when
/// ξ_F = 0.
pub fn tomography_error(mech: &MechanicalParams, meas: &MeasurementParams) -> Result<TomographyError> {
    if !(meas.omega_q > 0.0) {
        return Err(Error::domain("tomography_error", "omega_q must be positive"));
    }
    let xf = meas.xi_f();
    let xx = if meas.omega_x.is_finite() { meas.xi_x() } else { 0.0 };
    let lam_x = (xx * xx + 0.5 * (-2.0 * meas.squeeze_q).exp()).sqrt();
    let m = mech.mass;
    let oq = meas.omega_q;
    let v_xx = HBAR / (2f64.sqrt() * m * oq) * lam_x.powf(1.5) * xf.sqrt();
    let v_xp = -0.5 * HBAR * lam_x * xf;
    let v_pp = HBAR * m * oq / 2f64.sqrt() * lam_x.sqrt() * xf.powf(1.5);
    let det_ratio = lam_x * lam_x * xf * xf;
    Ok(TomographyError {
        v_xx,
        v_xp,
        v_pp,
        det_ratio,
        sub_heisenberg: det_ratio < 1.0,
        regime_warning: meas.omega_q < 10.0 * mech.omega_m,
    })
}

/// Back-action-evading partner of an amplitude-quadrature filter:
/// `g₁(t) = −(Ω_q²/ω_m)·∫_t^∞ sin(ω_m(t′−t)) g₂(t′) dt′` cancels the a₁
/// content of the combined readout `∫[g₁b₁ + g₂b₂]dt` exactly.
///
/// `g2` is sampled on a uniform grid of step `dt`. Expanding the sine, the
/// integral needs only the two backward moments `∫ sin(ωt′)g₂` and
/// `∫ cos(ωt′)g₂`, accumulated with a Simpson-type three-point rule per
/// interval (O(n) total, O(h³) accuracy), plus an analytic exponential tail
/// fitted to the last quarter of the samples.
pub fn bae_filter(
    g2: &[f64],
    dt: f64,
    mech: &MechanicalParams,
    omega_q: f64,
) -> Result<Vec<f64>> {
    let op = "bae_filter";
    if g2.len() < 8 || !(dt > 0.0) {
        return Err(Error::domain(op, "need at least 8 samples and positive dt"));
    }
    if !(mech.omega_m > 0.0) {
        return Err(Error::domain(op, "needs a mechanical oscillator"));
    }
    let peak = g2.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let tail_level = g2[g2.len() - 4..].iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    if peak > 0.0 && tail_level > 0.05 * peak {
        return Err(Error::domain(op, "g2 does not decay over the provided grid"));
    }
    let wm = mech.omega_m;
    let coupling = omega_q * omega_q / wm;
    let n = g2.len();
    let u: Vec<f64> = (0..n).map(|j| (wm * j as f64 * dt).sin() * g2[j]).collect();
    let v: Vec<f64> = (0..n).map(|j| (wm * j as f64 * dt).cos() * g2[j]).collect();
    let cu = backward_cumulative(&u, dt);
    let cv = backward_cumulative(&v, dt);
    let tail = tail_decay_rate(g2, dt);
    let mut g1 = vec![0.0; n];
    for (k, g1k) in g1.iter_mut().enumerate() {
        let (c, s) = ((wm * k as f64 * dt).cos(), (wm * k as f64 * dt).sin());
        let mut acc = c * cu[k] - s * cv[k];
        // Analytic tail: g₂(t > T) ≈ g₂(T)·e^{−Γ(t−T)} with T the grid end.
        if let Some(gamma) = tail {
            let t_rel = ((n - 1 - k) as f64) * dt;
            let g_end = g2[n - 1];
            // ∫_0^∞ e^{-Γs} sin(ω(t_rel+s)) ds
            let denom = gamma * gamma + wm * wm;
            acc += g_end * (gamma * (wm * t_rel).sin() + wm * (wm * t_rel).cos()) / denom;
        }
        *g1k = -coupling * acc;
    }
    Ok(g1)
}

/// Backward cumulative integral `B[k] = ∫_{t_k}^{t_{n-1}} f dt′` with a
/// quadratic (three-point Newton–Cotes) rule on every interval.
fn backward_cumulative(f: &[f64], dt: f64) -> Vec<f64> {
    let n = f.len();
    let mut b = vec![0.0; n];
    for k in (0..n - 1).rev() {
        let seg = if k + 2 < n {
            dt / 12.0 * (5.0 * f[k] + 8.0 * f[k + 1] - f[k + 2])
        } else {
            dt / 12.0 * (-f[k - 1] + 8.0 * f[k] + 5.0 * f[k + 1])
        };
        b[k] = b[k + 1] + seg;
    }
    b
}

fn tail_decay_rate(g2: &[f64], dt: f64) -> Option<f64> {
    let n = g2.len();
    let a = g2[3 * n / 4..].iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let b = g2[n / 2..3 * n / 4].iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    if a <= 0.0 || b <= a {
        return None;
    }
    let span = (n as f64 / 4.0) * dt;
    Some((b / a).ln() / span)
}

/// Residual a₁ transfer of a readout pair relative to the uncompensated one,
/// computed against reference quadrature of the BAE constraint.
pub fn bae_residual(g1: &[f64], g2: &[f64], dt: f64, mech: &MechanicalParams, omega_q: f64) -> Result<f64> {
    let compensator = bae_filter(g2, dt, mech, omega_q)?;
    let scale = compensator.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    let worst = g1
        .iter()
        .zip(compensator.iter())
        .map(|(a, c)| (a - c).abs())
        .fold(0.0f64, f64::max);
    Ok(worst / scale)
}

/// Steering figures of merit dual to a tomography error ellipse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteeringMeasures {
    /// Time-reversed ellipse: (V_xx, −V_xp, V_pp) of the tomography error.
    pub v_xx: f64,
    pub v_xp: f64,
    pub v_pp: f64,
    /// 𝒮 = −ln(2√det/ħ); steerable iff 𝒮 > 0. `+∞` when det = 0.
    pub steerability: f64,
    /// Verifiable steerability −ln(4√(V_xx V_pp)/ħ).
    pub verifiable: f64,
}

pub fn steering_measures(tomo: &TomographyError) -> SteeringMeasures {
    let det = tomo.v_xx * tomo.v_pp - tomo.v_xp * tomo.v_xp;
    let steerability =
        if det == 0.0 { f64::INFINITY } else { -(2.0 * det.sqrt() / HBAR).ln() };
    let prod = tomo.v_xx * tomo.v_pp;
    let verifiable =
        if prod == 0.0 { f64::INFINITY } else { -(4.0 * prod.sqrt() / HBAR).ln() };
    SteeringMeasures {
        v_xx: tomo.v_xx,
        v_xp: -tomo.v_xp,
        v_pp: tomo.v_pp,
        steerability,
        verifiable,
    }
}

/// Logarithmic negativity of the joint mirror/out-going-light state:
/// `ℰ = ½ ln[1 + 25Ω_q²/(8Ω_F²)]` — positive for every Ω_q > 0.
pub fn universal_entanglement(omega_q: f64, omega_f: f64) -> Result<f64> {
    if !(omega_f > 0.0) {
        return Err(Error::domain("universal_entanglement", "omega_f must be positive"));
    }
    Ok(0.5 * (1.0 + 25.0 * omega_q * omega_q / (8.0 * omega_f * omega_f)).ln())
}

/// Added-noise variance of one linear readout `O = ∫[g₁b₁ + g₂b₂]dt` of a
/// free oscillator's initial quadrature, assuming vacuum optical input and
/// no classical noise.
///
/// Returns `(V_θθ^add, θ)` where θ is the mass quadrature the readout
/// addresses, `tanθ` fixed by the sine/cosine moments of g₂.
pub fn readout_added_noise(
    g1: &[f64],
    g2: &[f64],
    dt: f64,
    mech: &MechanicalParams,
    omega_q: f64,
) -> Result<(f64, f64)> {
    let op = "readout_added_noise";
    if g1.len() != g2.len() {
        return Err(Error::domain(op, "filter grids differ"));
    }
    let wm = mech.omega_m;
    let n = g2.len();
    let alpha = omega_q * (mech.mass / HBAR).sqrt();
    // Signal moments c_x = α∫g₂cos, c_p = α∫g₂sin/(Mω_m).
    let (mut mc, mut ms) = (0.0, 0.0);
    for (j, &g) in g2.iter().enumerate() {
        let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
        mc += w * g * (wm * j as f64 * dt).cos() * dt;
        ms += w * g * (wm * j as f64 * dt).sin() * dt;
    }
    let c_x = alpha * mc;
    let c_p = alpha * ms / (mech.mass * wm);
    // a₁ kernel = g₁ + BA convolution; a₂ kernel = g₂.
    let comp = bae_filter(g2, dt, mech, omega_q)?;
    let f1: Vec<f64> = g1.iter().zip(comp.iter()).map(|(a, c)| a - c).collect();
    let int2 = |f: &[f64]| -> f64 {
        f.iter()
            .enumerate()
            .map(|(j, &v)| v * v * if j == 0 || j == n - 1 { 0.5 * dt } else { dt })
            .sum()
    };
    // Vacuum inputs: S₁ = S₂ = 1, so Var N = ½(∫f₁² + ∫g₂²).
    let var_n = 0.5 * (int2(&f1) + int2(g2));
    let norm = mech.mass * wm;
    let a2 = c_x * c_x + (c_p * norm).powi(2);
    if a2 == 0.0 {
        return Err(Error::domain(op, "readout carries no signal"));
    }
    let theta = (c_p * norm).atan2(c_x);
    Ok((var_n / a2, theta))
}

/// Nelder–Mead minimization in two parameters.
pub fn nelder_mead_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    start: (f64, f64),
    step: (f64, f64),
    iterations: usize,
) -> (f64, f64, f64) {
    let mut simplex = vec![
        (start.0, start.1),
        (start.0 + step.0, start.1),
        (start.0, start.1 + step.1),
    ];
    let mut vals: Vec<f64> = simplex.iter().map(|&(a, b)| f(a, b)).collect();
    for _ in 0..iterations {
        // Order best -> worst.
        let mut idx = [0, 1, 2];
        idx.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap());
        let (b, m, w) = (idx[0], idx[1], idx[2]);
        let centroid =
            ((simplex[b].0 + simplex[m].0) / 2.0, (simplex[b].1 + simplex[m].1) / 2.0);
        let reflect =
            (2.0 * centroid.0 - simplex[w].0, 2.0 * centroid.1 - simplex[w].1);
        let fr = f(reflect.0, reflect.1);
        if fr < vals[b] {
            let expand =
                (centroid.0 + 2.0 * (reflect.0 - centroid.0), centroid.1 + 2.0 * (reflect.1 - centroid.1));
            let fe = f(expand.0, expand.1);
            if fe < fr {
                simplex[w] = expand;
                vals[w] = fe;
            } else {
                simplex[w] = reflect;
                vals[w] = fr;
            }
        } else if fr < vals[m] {
            simplex[w] = reflect;
            vals[w] = fr;
        } else {
            let contract = (
                centroid.0 + 0.5 * (simplex[w].0 - centroid.0),
                centroid.1 + 0.5 * (simplex[w].1 - centroid.1),
            );
            let fc = f(contract.0, contract.1);
            if fc < vals[w] {
                simplex[w] = contract;
                vals[w] = fc;
            } else {
                for i in [m, w] {
                    simplex[i] = (
                        (simplex[i].0 + simplex[b].0) / 2.0,
                        (simplex[i].1 + simplex[b].1) / 2.0,
                    );
                    vals[i] = f(simplex[i].0, simplex[i].1);
                }
            }
        }
    }
    let mut best = 0;
    for i in 1..3 {
        if vals[i] < vals[best] {
            best = i;
        }
    }
    (simplex[best].0, simplex[best].1, vals[best])
}
