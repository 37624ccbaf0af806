//! Multi-system protocols in normalized units (ħ = M = 1): two-oscillator
//! teleportation figures of merit, mechanical-entanglement windows, and the
//! single-photon strong-coupling criterion.

use crate::consts::HBAR;
use crate::params::MechanicalParams;
use crate::verification;
use crate::{Error, Result};

/// Parameters of the two-oscillator teleportation loop (ħ = M = 1 units;
/// every entry is a rate).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TeleportParams {
    /// Optomechanical resonance ω_opt of both oscillators.
    pub omega_opt: f64,
    /// Measurement strength Ω_q.
    pub omega_q: f64,
    /// Feedback gain ε_fb of the cross-fed phase quadratures.
    pub eps_fb: f64,
    /// Squeeze factor q of the entangled drive (power factor e^{-2q}).
    pub squeeze_q: f64,
    /// Classical force-noise corner Ω_F.
    pub omega_f: f64,
    /// Classical sensing-noise corner Ω_x.
    pub omega_x: f64,
}

/// Normal-mode structure of the feedback-coupled pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sloshing {
    /// Ω_± = √(ω_opt² ± ε_fb Ω_q).
    pub omega_plus: f64,
    pub omega_minus: f64,
    /// Ω_slosh = Ω₊ − Ω₋.
    pub omega_slosh: f64,
    /// First state exchange at τ_ex = π/Ω_slosh (∞ when ε_fb = 0).
    pub tau_exchange: f64,
}

/// Normal modes and exchange time of the teleportation loop. Errors when
/// `ω_opt² ≤ ε_fb Ω_q` (the soft mode goes unstable).
pub fn teleport_sloshing(p: &TeleportParams) -> Result<Sloshing> {
    let w2 = p.omega_opt * p.omega_opt;
    let coupling = p.eps_fb * p.omega_q;
    if w2 <= coupling {
        return Err(Error::unphysical(
            "teleport_sloshing",
            format!("unstable: omega_opt^2 = {w2:e} must exceed eps_fb*omega_q = {coupling:e}"),
        ));
    }
    let omega_plus = (w2 + coupling).sqrt();
    let omega_minus = (w2 - coupling).sqrt();
    let omega_slosh = omega_plus - omega_minus;
    let tau_exchange =
        if omega_slosh > 0.0 { std::f64::consts::PI / omega_slosh } else { f64::INFINITY };
    Ok(Sloshing { omega_plus, omega_minus, omega_slosh, tau_exchange })
}

/// Added-noise ellipse of one teleportation exchange.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TeleportNoise {
    /// Position-diagonal entry of V_add (ħ = M = 1 units).
    pub v_xx: f64,
    /// Momentum-diagonal entry.
    pub v_pp: f64,
    /// det(V_add) in units of ħ²/4.
    pub det_ratio: f64,
}

/// Added noise at the exchange time:
/// `V_add = (π/8)·(ζ_F Ω_q² + ζ_x ε²)/Ω_slosh · diag(Ω₊⁻² + Ω₋⁻², 2)` with
/// `ζ_x = √(e^{-2q} + 2ξ_x²)`, `ζ_F = √(e^{-2q} + 2ξ_F²)`.
///
/// Entry normalization is convention-dependent; the determinant is the
/// convention-free figure of merit.
pub fn teleport_added_noise(p: &TeleportParams) -> Result<TeleportNoise> {
    let slosh = teleport_sloshing(p)?;
    if slosh.omega_slosh == 0.0 {
        return Err(Error::domain("teleport_added_noise", "no exchange at eps_fb = 0"));
    }
    let e2q = (-2.0 * p.squeeze_q).exp();
    let xi_x = p.omega_q / p.omega_x;
    let xi_f = p.omega_f / p.omega_q;
    let zeta_x = (e2q + 2.0 * xi_x * xi_x).sqrt();
    let zeta_f = (e2q + 2.0 * xi_f * xi_f).sqrt();
    let prefactor = std::f64::consts::PI / 8.0
        * (zeta_f * p.omega_q * p.omega_q + zeta_x * p.eps_fb * p.eps_fb)
        / slosh.omega_slosh;
    let v_xx = prefactor * (slosh.omega_plus.powi(-2) + slosh.omega_minus.powi(-2));
    let v_pp = prefactor * 2.0;
    Ok(TeleportNoise { v_xx, v_pp, det_ratio: 4.0 * v_xx * v_pp })
}

/// Asymptotic optimum of the teleportation noise,
/// `det(V_add) = (ħ²/4)π²(e^{-2q} + 2Ω_F/Ω_x)`, reached at
/// `Ω_q = √(Ω_x Ω_F)` and ω_opt → ∞. Returned as det/(ħ²/4).
pub fn teleport_optimal_det_ratio(squeeze_q: f64, omega_f: f64, omega_x: f64) -> f64 {
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    pi2 * ((-2.0 * squeeze_q).exp() + 2.0 * omega_f / omega_x)
}

/// Minimize the added-noise determinant over (Ω_q, ε_fb) at fixed ω_opt.
pub fn teleport_optimize(
    omega_opt: f64,
    squeeze_q: f64,
    omega_f: f64,
    omega_x: f64,
) -> Result<(TeleportParams, f64)> {
    let oq_center = (omega_f * omega_x).sqrt();
    let mut best: Option<(TeleportParams, f64)> = None;
    for i in 0..60 {
        let oq = oq_center * 10f64.powf(-0.5 + i as f64 / 59.0);
        for j in 0..80 {
            let eps = omega_opt * omega_opt / oq * 10f64.powf(-3.0 + 2.9 * j as f64 / 79.0);
            let p = TeleportParams {
                omega_opt,
                omega_q: oq,
                eps_fb: eps,
                squeeze_q,
                omega_f,
                omega_x,
            };
            if let Ok(noise) = teleport_added_noise(&p) {
                if best.as_ref().map_or(true, |(_, d)| noise.det_ratio < *d) {
                    best = Some((p, noise.det_ratio));
                }
            }
        }
    }
    best.ok_or_else(|| Error::numerical("teleport_optimize", "no stable parameter point found"))
}

/// Feasibility window for verifiable two-mirror entanglement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementWindow {
    /// Measurement strength used, Ω_q = √(Ω_x Ω_F).
    pub omega_q: f64,
    /// Entanglement survives for a time scale ~ 1/Ω_q.
    pub survival_time: f64,
    /// Best conditional occupation, Ω_F/Ω_x.
    pub n_eff_min: f64,
    /// Verification determinant ratio at Ω_q.
    pub tomography_det_ratio: f64,
    /// Verifiable-entanglement verdict: sub-SQL window plus sub-Heisenberg
    /// verification.
    pub feasible: bool,
}

/// Survival-time scale and feasibility of verifiable entanglement between
/// two mirrors, from the classical-noise ratio Ω_x/Ω_F and input squeezing.
pub fn entanglement_window(omega_f: f64, ratio: f64, squeeze_q: f64) -> Result<EntanglementWindow> {
    if !(ratio > 1.0) {
        return Err(Error::domain("entanglement_window", "need Omega_x/Omega_F > 1"));
    }
    let omega_x = ratio * omega_f;
    let omega_q = (omega_f * omega_x).sqrt();
    let n_eff_min = 1.0 / ratio;
    let det_ratio = (omega_f / omega_x).powi(2)
        + 0.5 * (-2.0 * squeeze_q).exp() * (omega_f / omega_q).powi(2);
    Ok(EntanglementWindow {
        omega_q,
        survival_time: 1.0 / omega_q,
        n_eff_min,
        tomography_det_ratio: det_ratio,
        feasible: ratio > 2.0 && det_ratio < 1.0,
    })
}

/// Single-photon strong-coupling criterion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrongCoupling {
    /// r = (λ/𝓕)/√(ħ/Mω_m): cavity linear dynamical range over the
    /// zero-point position spread.
    pub ratio: f64,
    /// Dual form: momentum transfer 𝓕ħω₀/c over √(ħMω_m); equals 2π/r.
    pub momentum_ratio: f64,
    /// Verdict r ≲ 1: a single photon can displace the oscillator by its
    /// quantum uncertainty.
    pub strongly_coupled: bool,
}

pub fn strong_coupling_ratio(
    mech: &MechanicalParams,
    wavelength: f64,
    finesse: f64,
) -> Result<StrongCoupling> {
    if !(finesse > 0.0) || !(wavelength > 0.0) || !(mech.omega_m > 0.0) {
        return Err(Error::domain(
            "strong_coupling_ratio",
            "need positive finesse, wavelength and omega_m",
        ));
    }
    let x_zp = (HBAR / (mech.mass * mech.omega_m)).sqrt();
    let ratio = wavelength / finesse / x_zp;
    let momentum_ratio = 2.0 * std::f64::consts::PI / ratio;
    Ok(StrongCoupling { ratio, momentum_ratio, strongly_coupled: ratio <= 1.0 })
}

/// Re-export of the universal mirror–light entanglement for protocol-level
/// reports.
pub use verification::universal_entanglement;
