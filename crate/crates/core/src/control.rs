//! Feedback cooling and passive-cooling figures of merit: the optimal
//! controller built from the conditional state, critical temperature,
//! radiation-pressure damping limits and dilution requirements.

use crate::conditional::{
    riccati_steady_state_damped, riccati_steady_state_general,
};
use crate::consts::{HBAR, KB};
use crate::params::{MechanicalParams, OpticalParams};
use crate::spectra::detuned_io;
use crate::thermal;
use crate::{Error, Result};

/// Steady state reachable by optimal linear feedback from a conditional state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlledState {
    pub v_xx: f64,
    pub v_pp: f64,
    /// Controller decay rate λ in mixed units (kg/s); V_xp^ctrl ≡ 0.
    pub lambda: f64,
    /// Purity of the controlled state, U = (2/ħ)√(V_xx^ctrl·V_pp^ctrl)
    /// = (2/ħ)[√(V_xx V_pp) + V_xp] at the optimal gain.
    pub purity_u: f64,
    /// Effective occupation U/2 − 1/2.
    pub n_eff: f64,
}

/// Controlled covariances at a given feedback decay rate λ > 0:
/// `V_xx^ctrl = V_xx + V_xp/λ`, `V_pp^ctrl = V_pp + λV_xp`.
pub fn controlled_state_with_gain(
    v_xx: f64,
    v_xp: f64,
    v_pp: f64,
    lambda: f64,
) -> Result<ControlledState> {
    if !(lambda > 0.0) {
        return Err(Error::domain("controlled_state_with_gain", "lambda must be positive"));
    }
    if v_xp < 0.0 {
        return Err(Error::unphysical(
            "controlled_state_with_gain",
            "conditional V_xp must be nonnegative at steady state",
        ));
    }
    let cxx = v_xx + v_xp / lambda;
    let cpp = v_pp + lambda * v_xp;
    let u = 2.0 / HBAR * (cxx * cpp).sqrt();
    Ok(ControlledState { v_xx: cxx, v_pp: cpp, lambda, purity_u: u, n_eff: 0.5 * (u - 1.0) })
}

/// Optimal controlled steady state: λ* = √(V_pp/V_xx) minimizes the
/// occupation, giving `U^ctrl = (2/ħ)[√(V_xx V_pp) + V_xp]`.
pub fn optimal_controlled_state(v_xx: f64, v_xp: f64, v_pp: f64) -> Result<ControlledState> {
    if !(v_xx > 0.0) {
        return Err(Error::domain("optimal_controlled_state", "V_xx must be positive"));
    }
    controlled_state_with_gain(v_xx, v_xp, v_pp, (v_pp / v_xx).sqrt())
}

/// Variance of the mass quadrature `x_θ = x cosθ + p sinθ/(Mω_ref)` for a
/// covariance triple, with ω_ref normalizing momentum.
pub fn quadrature_variance(
    v_xx: f64,
    v_xp: f64,
    v_pp: f64,
    theta: f64,
    mass: f64,
    omega_ref: f64,
) -> f64 {
    let (c, s) = (theta.cos(), theta.sin());
    let n = mass * omega_ref;
    c * c * v_xx + 2.0 * c * s * v_xp / n + s * s * v_pp / (n * n)
}

/// Critical temperature `T_c = ħ ω_m Q_m / (2√2 k_B)` separating the
/// measurement-limited from the thermally limited feedback-cooling regimes.
pub fn critical_temperature(mech: &MechanicalParams) -> Result<f64> {
    if !(mech.gamma_m > 0.0) || !(mech.omega_m > 0.0) {
        return Err(Error::domain("critical_temperature", "need positive omega_m and gamma_m"));
    }
    Ok(HBAR * mech.omega_m * mech.quality_factor() / (2.0 * 2f64.sqrt() * KB))
}

/// Occupation after optimal feedback cooling at measurement strength Ω_q,
/// with phase-quadrature readout and thermal force noise from the mechanical
/// bath (no classical sensing noise).
pub fn feedback_cooling_occupation(mech: &MechanicalParams, omega_q: f64) -> Result<f64> {
    if !(omega_q > 0.0) {
        return Err(Error::domain("feedback_cooling_occupation", "omega_q must be positive"));
    }
    let s_thermal = thermal::fdt_force_spectrum(mech, mech.gamma_m, mech.temperature)?;
    let s_ba = HBAR * mech.mass * omega_q * omega_q;
    let q_diff = 0.5 * (s_ba + s_thermal);
    let r_sens = 0.5 * HBAR / (mech.mass * omega_q * omega_q);
    let (vxx, vxp, vpp) = riccati_steady_state_general(mech.mass, mech.omega_m, q_diff, r_sens)?;
    Ok(optimal_controlled_state(vxx, vxp, vpp)?.n_eff)
}

/// Brute-force sweep of Ω_q minimizing the feedback-cooled occupation.
pub fn optimize_feedback_cooling(
    mech: &MechanicalParams,
    omega_q_min: f64,
    omega_q_max: f64,
    points: usize,
) -> Result<(f64, f64)> {
    let mut best = (omega_q_min, f64::INFINITY);
    for k in 0..points {
        let oq = omega_q_min * (omega_q_max / omega_q_min).powf(k as f64 / (points - 1) as f64);
        let n = feedback_cooling_occupation(mech, oq)?;
        if n < best.1 {
            best = (oq, n);
        }
    }
    Ok(best)
}

/// Scaling prediction `𝒩_eff ≈ 2^{-3/4}·(T_m/T_c)^{1/2}` for T_m ≪ T_c.
pub fn feedback_cooling_scaling(t_ratio: f64) -> f64 {
    2f64.powf(-0.75) * t_ratio.sqrt()
}

/// Radiation-pressure damping figures for a detuned cooling beam:
/// `γ_opt = Θ³/(4γω_m)·(1 − γ²/4Δ²)` and the occupation floor
/// `n̄_opt = γ²/(4Δ²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiationDamping {
    pub gamma_opt: f64,
    pub n_opt: f64,
    /// γ/Δ; the formulas assume Δ = ω_m and are accurate when this is small.
    pub validity_ratio: f64,
}

pub fn radiation_damping(opt: &OpticalParams, mech: &MechanicalParams) -> Result<RadiationDamping> {
    if opt.detuning == 0.0 {
        return Err(Error::domain("radiation_damping", "n_opt undefined at zero detuning"));
    }
    if !(mech.omega_m > 0.0) {
        return Err(Error::domain("radiation_damping", "need a mechanical oscillator"));
    }
    let theta3 = opt.theta_cubed_from_power(mech.mass);
    let ratio = opt.gamma / opt.detuning;
    Ok(RadiationDamping {
        gamma_opt: theta3 / (4.0 * opt.gamma * mech.omega_m) * (1.0 - 0.25 * ratio * ratio),
        n_opt: 0.25 * ratio * ratio,
        validity_ratio: ratio.abs(),
    })
}

/// Damping-weighted mean occupation over several baths:
/// `n̄ = Σ γ_j n̄_j / Σ γ_j`.
pub fn multi_bath_occupation(baths: &[(f64, f64)]) -> Result<f64> {
    let total: f64 = baths.iter().map(|(g, _)| g).sum();
    if !(total > 0.0) || baths.iter().any(|(g, _)| *g < 0.0) {
        return Err(Error::domain("multi_bath_occupation", "need nonnegative rates, some positive"));
    }
    Ok(baths.iter().map(|(g, n)| g * n).sum::<f64>() / total)
}

/// Q·f requirement for ground-state cooling with optical dilution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfReport {
    /// Required Q_m·f_m product, `k_B T_m/(2πħ)/dilution²`
    /// (≈ 6×10¹²·(T_m/300 K) at dilution 1).
    pub required_qf: f64,
    /// Occupation reached: `n̄ = k_B T_m/(ħω_m Q_m)·(ω_m/ω_opt)²`.
    pub achieved_n: f64,
    /// Relaxation of the Q·f requirement relative to no dilution.
    pub relaxation_factor: f64,
}

pub fn qf_criterion(mech: &MechanicalParams, dilution: f64) -> Result<QfReport> {
    if dilution < 1.0 {
        return Err(Error::domain("qf_criterion", "dilution ω_opt/ω_m must be ≥ 1"));
    }
    let required_qf =
        KB * mech.temperature / (2.0 * std::f64::consts::PI * HBAR) / (dilution * dilution);
    let achieved_n = if mech.gamma_m > 0.0 && mech.omega_m > 0.0 {
        KB * mech.temperature / (HBAR * mech.omega_m * mech.quality_factor())
            / (dilution * dilution)
    } else {
        0.0
    };
    Ok(QfReport { required_qf, achieved_n, relaxation_factor: dilution * dilution })
}

/// Occupation of a radiation-damped oscillator with and without optimal
/// measurement-based feedback on the out-going light.
///
/// The damping-only value is the bath-weighted occupation; the feedback
/// value conditions on the cooling beam's output (broadband-cavity
/// approximation, measurement strength Ω_q^cav) and applies the optimal
/// controller.
pub fn feedback_recovery_gain(opt: &OpticalParams, mech: &MechanicalParams) -> Result<(f64, f64)> {
    let rd = radiation_damping(opt, mech)?;
    let n_thermal = thermal::occupation(mech.omega_m, mech.temperature);
    let damping_only =
        multi_bath_occupation(&[(mech.gamma_m, n_thermal), (rd.gamma_opt, rd.n_opt)])?;

    // Conditional route: total force noise = mechanical bath + optical bath
    // (FDT form at occupation n_opt), sensed at Omega_q^cav.
    let io = detuned_io(opt, mech, mech.omega_m)?;
    let omega_q = io.omega_q;
    if omega_q == 0.0 {
        return Ok((damping_only, damping_only));
    }
    let s_mech = 8.0 * mech.mass * mech.gamma_m * HBAR * mech.omega_m * (n_thermal + 0.5);
    let s_opt = 8.0 * mech.mass * rd.gamma_opt * HBAR * mech.omega_m * (rd.n_opt + 0.5);
    let q_diff = 0.5 * (s_mech + s_opt);
    let r_sens = 0.5 * HBAR / (mech.mass * omega_q * omega_q);
    let gamma_tot = mech.gamma_m + rd.gamma_opt;
    let (vxx, vxp, vpp) =
        riccati_steady_state_damped(mech.mass, mech.omega_m, gamma_tot, q_diff, r_sens)?;
    let with_feedback = optimal_controlled_state(vxx, vxp, vpp)?.n_eff;
    Ok((damping_only, with_feedback))
}
