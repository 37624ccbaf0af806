//! Quantum-noise spectral densities and SQL curves for the tuned and detuned
//! strawman interferometer: homodyne readout with squeezing and loss,
//! variational readout, loss limits, optical rigidity and noise budgets.

use num_complex::Complex64;

use crate::consts::HBAR;
use crate::params::{
    MeasurementParams, MechanicalParams, OpticalParams, SpectrumCurve, SpectrumUnits,
};
use crate::quadrature::QuadratureCovariance;
use crate::{Error, Result};

/// A spectral value that may sit at an exact resonance.
///
/// Tagged instead of a raw `f64::INFINITY` so table writers stay parseable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralValue {
    Finite(f64),
    Infinite,
}

impl SpectralValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            SpectralValue::Finite(v) => Some(v),
            SpectralValue::Infinite => None,
        }
    }

    /// Collapse to `f64`, mapping the resonance sentinel to `+∞`.
    pub fn to_f64(self) -> f64 {
        match self {
            SpectralValue::Finite(v) => v,
            SpectralValue::Infinite => f64::INFINITY,
        }
    }
}

/// Force-referred SQL `S_F^SQL = 2ħM|Ω² − ω_m²|`, N²/Hz. Zero on resonance.
pub fn sql_force(mech: &MechanicalParams, omega: f64) -> f64 {
    2.0 * HBAR * mech.mass * (omega * omega - mech.omega_m * mech.omega_m).abs()
}

/// Displacement-referred SQL `S_x^SQL = 2ħ/(M|Ω² − ω_m²|)`, m²/Hz.
/// Infinite exactly on resonance.
pub fn sql_displacement(mech: &MechanicalParams, omega: f64) -> SpectralValue {
    let d = (omega * omega - mech.omega_m * mech.omega_m).abs();
    if d == 0.0 {
        SpectralValue::Infinite
    } else {
        SpectralValue::Finite(2.0 * HBAR / (mech.mass * d))
    }
}

/// Free-mass displacement SQL `2ħ/(MΩ²)`, m²/Hz.
pub fn sql_displacement_free_mass(mass: f64, omega: f64) -> f64 {
    2.0 * HBAR / (mass * omega * omega)
}

/// Strain-referred SQL `S_h^SQL = 2ħ|Ω² − ω_m²|/(M Ω⁴ L²)`, 1/Hz.
pub fn sql_strain(mech: &MechanicalParams, omega: f64, length: f64) -> f64 {
    sql_force(mech, omega) / (mech.mass * mech.mass * omega.powi(4) * length * length)
}

/// Frequency-dependent optomechanical coupling of the tuned interferometer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KimbleFactor {
    pub omega: f64,
    /// 𝒦(Ω) = 2Θ³γ / ((Ω² − ω_m²)(Ω² + γ²)).
    pub k: f64,
    /// Cavity storage phase β with e^{2iβ} = (Ω − iγ)/(Ω + iγ).
    pub beta: f64,
}

/// Coupling factor and sideband phase of the tuned (Δ = 0) interferometer.
pub fn kimble_factor(opt: &OpticalParams, mech: &MechanicalParams, omega: f64) -> Result<KimbleFactor> {
    if opt.detuning != 0.0 {
        return Err(Error::domain("kimble_factor", "tuned cavity required; use detuned_io"));
    }
    let theta3 = opt.theta_cubed_from_power(mech.mass);
    let g = opt.gamma;
    let k = 2.0 * theta3 * g
        / ((omega * omega - mech.omega_m * mech.omega_m) * (omega * omega + g * g));
    let e2ib = Complex64::new(omega, -g) / Complex64::new(omega, g);
    Ok(KimbleFactor { omega, k, beta: 0.5 * e2ib.arg() })
}

/// Quantum-noise components of one homodyne readout point, force-referred.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadoutNoise {
    /// Total force-referred quantum noise, N²/Hz.
    pub force_total: f64,
    /// Total displacement-referred quantum noise, m²/Hz.
    pub displacement_total: f64,
    /// Phase-quadrature (photon counting) component, force-referred.
    pub shot: f64,
    /// Amplitude-quadrature (radiation-pressure) component, force-referred;
    /// vanishes identically at the variational angle tanζ = 1/𝒦.
    pub back_action: f64,
}

/// Total quantum noise of the tuned interferometer reading out `b_ζ`,
/// with an arbitrary (squeezed, lossy) input covariance.
///
/// The output noise is `(cosζ − 𝒦 sinζ) a₁ + sinζ a₂` and the signal picks up
/// `sinζ`, so the force-referred spectrum is
/// `S_F = S_SQL^F/(2𝒦 sin²ζ) · [v C vᵀ]` with `v = (cosζ − 𝒦 sinζ, sinζ)`.
/// Components are grouped by input quadrature: the a₁ channel is back-action,
/// the a₂ channel is shot noise; the a₁a₂ correlation is split evenly.
pub fn tuned_readout_noise(
    opt: &OpticalParams,
    mech: &MechanicalParams,
    meas: &MeasurementParams,
    omega: f64,
) -> Result<ReadoutNoise> {
    let zeta = meas.zeta;
    if zeta.sin() == 0.0 {
        return Err(Error::domain(
            "tuned_readout_noise",
            "sin(zeta) = 0 carries no displacement signal; force referral undefined",
        ));
    }
    let kf = kimble_factor(opt, mech, omega)?;
    let cov = QuadratureCovariance::squeezed(meas.squeeze_q, meas.squeeze_angle, meas.loss)?;
    let (c, s) = (zeta.cos(), zeta.sin());
    let a1_coeff = c - kf.k * s;
    let cross = a1_coeff * s * cov.s12;
    let back_action = a1_coeff * a1_coeff * cov.s11 + cross;
    let shot = s * s * cov.s22 + cross;
    let sql_f = sql_force(mech, omega);
    let referral = sql_f / (2.0 * kf.k.abs() * s * s);
    let force_total = (back_action + shot) * referral;
    let chi2 = 1.0 / (mech.mass * mech.mass
        * (omega * omega - mech.omega_m * mech.omega_m).powi(2));
    Ok(ReadoutNoise {
        force_total,
        displacement_total: force_total * chi2,
        shot: shot * referral,
        back_action: back_action * referral,
    })
}

/// Variational readout angle tanζ = 1/𝒦 that cancels back-action at Ω.
pub fn variational_angle(kimble: &KimbleFactor) -> f64 {
    (1.0 / kimble.k).atan()
}

/// Effective sensing/back-action noise pair of the tuned readout,
/// `(S_ZZ, S_FF, S_ZF)` with Z displacement-referred and F the
/// radiation-pressure force. Satisfies `S_ZZ S_FF − S_ZF² ≥ ħ²`.
pub fn measurement_noise_triple(
    opt: &OpticalParams,
    mech: &MechanicalParams,
    meas: &MeasurementParams,
    omega: f64,
) -> Result<(f64, f64, f64)> {
    let kf = kimble_factor(opt, mech, omega)?;
    let cov = QuadratureCovariance::squeezed(meas.squeeze_q, meas.squeeze_angle, meas.loss)?;
    let sql_f = sql_force(mech, omega);
    let sql_x = 2.0 * HBAR / (mech.mass * (omega * omega - mech.omega_m * mech.omega_m).abs());
    let s_zz = sql_x / (2.0 * kf.k.abs()) * cov.s22;
    let s_ff = 0.5 * kf.k.abs() * sql_f * cov.s11;
    let s_zf = HBAR * cov.s12;
    Ok((s_zz, s_ff, s_zf))
}

/// Loss-and-squeeze floor of all back-action-evading schemes:
/// `√(S^BAE/S^SQL) ≥ (e^{-2q} ε)^{1/4}`.
pub fn bae_loss_limit(q: f64, eps: f64) -> Result<f64> {
    if q < 0.0 || !(0.0..=1.0).contains(&eps) {
        return Err(Error::domain("bae_loss_limit", "need q >= 0 and eps in [0, 1]"));
    }
    Ok(((-2.0 * q).exp() * eps).powf(0.25))
}

/// Effective single-mode description after adiabatic elimination of a
/// detuned cavity (valid for Ω ≪ √(γ² + Δ²)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetunedIo {
    /// Optical-spring-shifted resonance: ω_opt² = ω_m² − Θ³Δ/(γ² + Δ²).
    pub omega_opt_sq: f64,
    /// Effective measurement frequency Ω_q² = 2Θ³γ/(γ² + Δ²).
    pub omega_q: f64,
    /// 𝒦 = Ω_q²/(Ω² − ω_opt²) at the requested frequency.
    pub kimble: f64,
    /// |Ω|/√(γ² + Δ²); the elimination is accurate when ≪ 1.
    pub validity_ratio: f64,
}

/// Adiabatically eliminated input–output map of the detuned cavity:
/// `b₁ = a₁`, `b₂ = a₂ + αx`, `−M(Ω² − ω_opt²)x = α a₁ + F` with
/// `α² = M Ω_q²/ħ`.
pub fn detuned_io(opt: &OpticalParams, mech: &MechanicalParams, omega: f64) -> Result<DetunedIo> {
    if opt.gamma == 0.0 {
        return Err(Error::domain("detuned_io", "cavity bandwidth must be positive"));
    }
    let theta3 = opt.theta_cubed_from_power(mech.mass);
    let denom = opt.gamma * opt.gamma + opt.detuning * opt.detuning;
    let omega_opt_sq = mech.omega_m * mech.omega_m - theta3 * opt.detuning / denom;
    let omega_q = (2.0 * theta3 * opt.gamma / denom).sqrt();
    let kimble = omega_q * omega_q / (omega * omega - omega_opt_sq);
    Ok(DetunedIo { omega_opt_sq, omega_q, kimble, validity_ratio: omega.abs() / denom.sqrt() })
}

/// Complex optical spring constant of a detuned cavity, with its
/// low-frequency expansion `K(Ω) ≈ K₀ + iΩK₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalSpring {
    /// Rigidity K₀ = −MΘ³Δ/(Δ² + γ²), N/m.
    pub k0: f64,
    /// Velocity coefficient K₁ = −2MΘ³Δγ/(Δ² + γ²)², N·s/m; K₁ > 0 is
    /// anti-damping.
    pub k1: f64,
    /// Full K(Ω) = −MΘ³Δ/(Δ² + γ² − 2iγΩ − Ω²), N/m.
    pub k_full: Complex64,
}

pub fn optical_spring(opt: &OpticalParams, mech: &MechanicalParams, omega: f64) -> OpticalSpring {
    let theta3 = opt.theta_cubed_from_power(mech.mass);
    let m = mech.mass;
    let (d, g) = (opt.detuning, opt.gamma);
    let denom = d * d + g * g;
    let k_full = Complex64::new(-m * theta3 * d, 0.0)
        / Complex64::new(denom - omega * omega, -2.0 * g * omega);
    OpticalSpring {
        k0: -m * theta3 * d / denom,
        k1: -2.0 * m * theta3 * d * g / (denom * denom),
        k_full,
    }
}

/// Frequency and damping of the oscillator with the spring attached, using
/// the exact K evaluated at ω_m: `ω_m² → ω_m² + Re K(ω_m)/M`,
/// `γ_m → γ_m − Im K(ω_m)/(2Mω_m)`.
pub fn spring_shift(opt: &OpticalParams, mech: &MechanicalParams) -> (f64, f64) {
    let spring = optical_spring(opt, mech, mech.omega_m);
    let omega_sq = mech.omega_m * mech.omega_m + spring.k_full.re / mech.mass;
    let gamma = if mech.omega_m > 0.0 {
        mech.gamma_m - spring.k_full.im / (2.0 * mech.mass * mech.omega_m)
    } else {
        mech.gamma_m - spring.k1 / (2.0 * mech.mass)
    };
    (omega_sq, gamma)
}

/// Stability verdict for a pair of optical springs acting on one oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpringStability {
    pub k0_total: f64,
    pub k1_total: f64,
    pub effective_omega_sq: f64,
    pub effective_gamma: f64,
    pub stable: bool,
}

/// Composite double-spring stability: stable iff the combined restoring
/// force and combined damping are both positive.
pub fn double_spring_stability(
    spring_a: &OpticalSpring,
    spring_b: &OpticalSpring,
    mech: &MechanicalParams,
) -> SpringStability {
    let k0 = spring_a.k0 + spring_b.k0;
    let k1 = spring_a.k1 + spring_b.k1;
    let m = mech.mass;
    let omega_sq = mech.omega_m * mech.omega_m + k0 / m;
    let gamma = mech.gamma_m - k1 / (2.0 * m);
    SpringStability {
        k0_total: k0,
        k1_total: k1,
        effective_omega_sq: omega_sq,
        effective_gamma: gamma,
        stable: omega_sq > 0.0 && gamma > 0.0,
    }
}

/// Classical displacement-noise budget relative to the free-mass SQL.
#[derive(Debug, Clone)]
pub struct NoiseBudget {
    pub shot: SpectrumCurve,
    pub back_action: SpectrumCurve,
    pub force_classical: SpectrumCurve,
    pub sensing_classical: SpectrumCurve,
    pub total: SpectrumCurve,
    pub sql: SpectrumCurve,
    /// min over the grid of S_cl/S_SQL; analytically 2Ω_F/Ω_x.
    pub min_classical_to_sql: f64,
    /// Grid frequency achieving the minimum; analytically √(Ω_F Ω_x).
    pub argmin_omega: f64,
}

/// Classical force noise referred to displacement: `2ħΩ_F²/(MΩ⁴)`, m²/Hz.
pub fn classical_force_noise_displacement(mech: &MechanicalParams, omega_f: f64, omega: f64) -> f64 {
    2.0 * HBAR * omega_f * omega_f / (mech.mass * omega.powi(4))
}

/// Classical sensing noise: white, `2ħ/(MΩ_x²)`, m²/Hz.
pub fn classical_sensing_noise(mech: &MechanicalParams, omega_x: f64) -> f64 {
    2.0 * HBAR / (mech.mass * omega_x * omega_x)
}

/// Displacement-referred classical noise budget over a grid, together with
/// the quantum noise of a phase readout at strength Ω_q.
pub fn classical_noise_budget(
    mech: &MechanicalParams,
    meas: &MeasurementParams,
    grid: &[f64],
) -> Result<NoiseBudget> {
    if grid.is_empty() {
        return Err(Error::domain("classical_noise_budget", "empty frequency grid"));
    }
    if !(meas.omega_f > 0.0) || !meas.omega_x.is_finite() || !(meas.omega_x > 0.0) {
        return Err(Error::domain("classical_noise_budget", "need positive Omega_F and Omega_x"));
    }
    let m = mech.mass;
    let oq = meas.omega_q;
    let n = grid.len();
    let mut shot = Vec::with_capacity(n);
    let mut ba = Vec::with_capacity(n);
    let mut fcl = Vec::with_capacity(n);
    let mut xcl = Vec::with_capacity(n);
    let mut tot = Vec::with_capacity(n);
    let mut sql = Vec::with_capacity(n);
    let mut min_ratio = f64::INFINITY;
    let mut argmin = grid[0];
    for &w in grid {
        // Free-mass phase readout: shot = ħ/(MΩ_q²), BA = ħΩ_q²/(MΩ⁴).
        let s_shot = HBAR / (m * oq * oq);
        let s_ba = HBAR * oq * oq / (m * w.powi(4));
        let s_f = classical_force_noise_displacement(mech, meas.omega_f, w);
        let s_x = classical_sensing_noise(mech, meas.omega_x);
        let s_sql = sql_displacement_free_mass(m, w);
        let ratio = (s_f + s_x) / s_sql;
        if ratio < min_ratio {
            min_ratio = ratio;
            argmin = w;
        }
        shot.push(s_shot);
        ba.push(s_ba);
        fcl.push(s_f);
        xcl.push(s_x);
        tot.push(s_shot + s_ba + s_f + s_x);
        sql.push(s_sql);
    }
    let units = SpectrumUnits::MeterSquaredPerHz;
    Ok(NoiseBudget {
        shot: SpectrumCurve::new(grid.to_vec(), shot, units)?,
        back_action: SpectrumCurve::new(grid.to_vec(), ba, units)?,
        force_classical: SpectrumCurve::new(grid.to_vec(), fcl, units)?,
        sensing_classical: SpectrumCurve::new(grid.to_vec(), xcl, units)?,
        total: SpectrumCurve::new(grid.to_vec(), tot, units)?,
        sql: SpectrumCurve::new(grid.to_vec(), sql, units)?,
        min_classical_to_sql: min_ratio,
        argmin_omega: argmin,
    })
}

/// Analytic SQL-beating factor of the classical budget: `min S_cl/S_SQL = 2Ω_F/Ω_x`.
pub fn classical_sql_beating(omega_f: f64, omega_x: f64) -> f64 {
    2.0 * omega_f / omega_x
}

/// Output spectra `(S_O^-, S_O^+)` of red-/blue-detuned probes:
/// `S_O^± = S_Z + α²S_x ± 2α²ħ Im χ`.
pub fn sideband_asymmetry(s_z: f64, alpha: f64, s_x: f64, im_chi: f64) -> (f64, f64) {
    let a2 = alpha * alpha;
    (s_z + a2 * s_x - 2.0 * a2 * HBAR * im_chi, s_z + a2 * s_x + 2.0 * a2 * HBAR * im_chi)
}

/// Occupation from sideband areas: `n̄ = I₊/(I₋ − I₊)`.
pub fn asymmetry_occupation(i_plus: f64, i_minus: f64) -> Result<f64> {
    if !(i_plus > 0.0) || i_minus <= i_plus {
        return Err(Error::domain(
            "asymmetry_occupation",
            "need I_minus > I_plus > 0 (blue-detuned area exceeds red-detuned)",
        ));
    }
    Ok(i_plus / (i_minus - i_plus))
}

/// Tuning requirements for a ponderomotive power-squeeze target e^{-2q}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PonderoRequirements {
    /// ω_opt/Ω_q ≈ e^{-q}.
    pub omega_opt_over_omega_q: f64,
    /// Thermal bound: Ω_F ≲ e^{-2q} ω_opt, expressed as the coefficient of ω_opt.
    pub omega_f_bound_over_omega_opt: f64,
}

pub fn pondero_squeeze_requirements(q_target: f64) -> Result<PonderoRequirements> {
    if q_target < 0.0 {
        return Err(Error::domain("pondero_squeeze_requirements", "q must be nonnegative"));
    }
    Ok(PonderoRequirements {
        omega_opt_over_omega_q: (-q_target).exp(),
        omega_f_bound_over_omega_opt: (-2.0 * q_target).exp(),
    })
}

/// Output spectrum of the low-frequency quadrature `b_ζ` of a strongly
/// trapped ponderomotive squeezer: `S = 1 + 𝒦̃² sin²ζ + 𝒦̃ sin2ζ` with
/// `𝒦̃ = (Ω_q/ω_opt)²`. Below unity for small negative ζ.
pub fn pondero_output_spectrum(omega_q: f64, omega_opt: f64, zeta: f64) -> f64 {
    let k = (omega_q / omega_opt).powi(2);
    1.0 + k * k * zeta.sin().powi(2) + k * (2.0 * zeta).sin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn tuned_opt(theta: f64, gamma: f64, mass: f64) -> OpticalParams {
        let omega_0 = OpticalParams::omega_from_wavelength(1064e-9);
        let power = OpticalParams::power_for_theta(theta, mass, 4000.0, omega_0);
        OpticalParams::new(omega_0, 0.0, gamma, 4000.0, power).unwrap()
    }

    #[test]
    fn sql_values() {
        let mech = MechanicalParams::free_mass(10.0);
        let w = 2.0 * PI * 100.0;
        assert_relative_eq!(sql_force(&mech, w), 2.0 * HBAR * 10.0 * w * w, max_relative = 1e-14);
        let sx = sql_displacement(&mech, w).finite().unwrap();
        assert_relative_eq!(sx, 2.0 * HBAR / (10.0 * w * w), max_relative = 1e-14);
        // Oscillator on resonance: force SQL zero, displacement SQL infinite.
        let osc = MechanicalParams::new(10.0, w, 0.0, 0.0).unwrap();
        assert_eq!(sql_force(&osc, w), 0.0);
        assert_eq!(sql_displacement(&osc, w), SpectralValue::Infinite);
        // Narrowband suppression of the strain SQL near resonance.
        let near = w * 1.001;
        let free = sql_strain(&MechanicalParams::free_mass(10.0), near, 4000.0);
        let narrow = sql_strain(&osc, near, 4000.0);
        assert!(narrow < 0.01 * free);
    }

    #[test]
    fn kimble_unity_point() {
        // Theta = gamma, free mass, Omega = gamma: K = 2g^4/(g^2 2g^2) = 1.
        let g = 2.0 * PI * 100.0;
        let mech = MechanicalParams::free_mass(10.0);
        let opt = tuned_opt(g, g, mech.mass);
        let kf = kimble_factor(&opt, &mech, g).unwrap();
        assert_relative_eq!(kf.k, 1.0, max_relative = 1e-10);
        // K -> 0 at high frequency; doubling power doubles K.
        assert!(kimble_factor(&opt, &mech, 100.0 * g).unwrap().k < 1e-3);
        let mut opt2 = opt;
        opt2.circulating_power *= 2.0;
        let k2 = kimble_factor(&opt2, &mech, g).unwrap().k;
        assert_relative_eq!(k2, 2.0 * kf.k, max_relative = 1e-10);
        // e^{2i beta} has unit modulus.
        let e2ib = Complex64::new(g, -opt.gamma) / Complex64::new(g, opt.gamma);
        assert_relative_eq!(e2ib.norm(), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn tuned_phase_readout_bounds() {
        let g = 2.0 * PI * 100.0;
        let mech = MechanicalParams::free_mass(10.0);
        let opt = tuned_opt(g, g, mech.mass);
        let meas = MeasurementParams::new(g, FRAC_PI_2).unwrap();
        // K = 1 point: total equals the SQL.
        let r = tuned_readout_noise(&opt, &mech, &meas, g).unwrap();
        assert_relative_eq!(r.force_total, sql_force(&mech, g), max_relative = 1e-10);
        // K = 10 and K = 0.1 both give 5.05x SQL (brute-force covariance route
        // is the same code path; the closed form is the oracle here).
        for target in [10.0, 0.1] {
            let mut o = opt;
            o.circulating_power *= target;
            let w = g;
            let k = kimble_factor(&o, &mech, w).unwrap().k;
            assert_relative_eq!(k, target, max_relative = 1e-10);
            let r = tuned_readout_noise(&o, &mech, &meas, w).unwrap();
            assert_relative_eq!(
                r.force_total,
                0.5 * (k + 1.0 / k) * sql_force(&mech, w),
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn variational_readout_cancels_back_action() {
        let g = 2.0 * PI * 100.0;
        let mech = MechanicalParams::free_mass(10.0);
        let opt = tuned_opt(g, g, mech.mass);
        let w = 0.5 * g;
        let kf = kimble_factor(&opt, &mech, w).unwrap();
        let zeta = variational_angle(&kf);
        let meas = MeasurementParams::new(g, zeta).unwrap();
        let r = tuned_readout_noise(&opt, &mech, &meas, w).unwrap();
        assert!(r.back_action.abs() < 1e-12 * r.force_total);
        // Residual is shot noise scaled by the signal loss sin^2.
        let shot_only = sql_force(&mech, w) / (2.0 * kf.k * zeta.sin().powi(2));
        assert_relative_eq!(r.force_total, shot_only, max_relative = 1e-10);
        assert!(r.force_total < sql_force(&mech, w));
    }

    #[test]
    fn heisenberg_bound_on_noise_triples() {
        let g = 2.0 * PI * 100.0;
        let mech = MechanicalParams::free_mass(10.0);
        let opt = tuned_opt(g, g, mech.mass);
        for (q, phi, eps) in [(0.0, 0.0, 0.0), (1.15, 0.0, 0.0), (0.8, 0.9, 0.3)] {
            let meas = MeasurementParams::new(g, FRAC_PI_2)
                .unwrap()
                .with_squeezing(q, phi)
                .unwrap()
                .with_loss(eps)
                .unwrap();
            for &w in &[0.3 * g, g, 3.0 * g] {
                let (szz, sff, szf) = measurement_noise_triple(&opt, &mech, &meas, w).unwrap();
                let lhs = szz * sff - szf * szf;
                assert!(lhs >= HBAR * HBAR * (1.0 - 1e-9), "HUP violated: {lhs:e}");
            }
        }
    }

    #[test]
    fn bae_limit_values() {
        // 10 dB squeezing, 1% loss: limited to ~5.6 below the SQL.
        let q = 10f64.sqrt().ln();
        let v = bae_loss_limit(q, 0.01).unwrap();
        assert_relative_eq!(v, 0.1778, max_relative = 2e-3);
        assert_relative_eq!(v, 1.0 / 5.6, max_relative = 0.01);
        assert_relative_eq!(bae_loss_limit(0.0, 1.0).unwrap(), 1.0);
        assert!(bae_loss_limit(200.0, 0.5).unwrap() < 1e-30);
        assert_eq!(bae_loss_limit(1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn detuned_io_spring_sign() {
        let mech = MechanicalParams::new(10.0, 100.0, 0.0, 0.0).unwrap();
        let omega_0 = OpticalParams::omega_from_wavelength(1064e-9);
        let power = OpticalParams::power_for_theta(500.0, mech.mass, 4000.0, omega_0);
        // Tuned: no spring.
        let opt0 = OpticalParams::new(omega_0, 0.0, 700.0, 4000.0, power).unwrap();
        let io0 = detuned_io(&opt0, &mech, 10.0).unwrap();
        assert_relative_eq!(io0.omega_opt_sq, mech.omega_m * mech.omega_m, max_relative = 1e-12);
        // Blue detuning (Delta < 0) stiffens.
        let optb = OpticalParams::new(omega_0, -700.0, 700.0, 4000.0, power).unwrap();
        let iob = detuned_io(&optb, &mech, 10.0).unwrap();
        assert!(iob.omega_opt_sq > mech.omega_m * mech.omega_m);
        // Free mass without a spring (tuned cavity): K = 1 exactly at
        // Omega = Omega_q, where the quantum noise touches the SQL.
        let fm = MechanicalParams::free_mass(10.0);
        let io = detuned_io(&opt0, &fm, 1.0).unwrap();
        let at_oq = detuned_io(&opt0, &fm, io.omega_q).unwrap();
        assert_relative_eq!(at_oq.kimble, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn detuned_io_matches_spring_shift() {
        // omega_opt^2 from the eliminated model equals omega_m^2 + K0/M.
        let mech = MechanicalParams::new(1.0, 300.0, 0.0, 0.0).unwrap();
        let omega_0 = OpticalParams::omega_from_wavelength(1064e-9);
        let power = OpticalParams::power_for_theta(200.0, mech.mass, 1.0, omega_0);
        let opt = OpticalParams::new(omega_0, -450.0, 300.0, 1.0, power).unwrap();
        let io = detuned_io(&opt, &mech, 1.0).unwrap();
        let spring = optical_spring(&opt, &mech, 0.0);
        assert_relative_eq!(
            io.omega_opt_sq,
            mech.omega_m * mech.omega_m + spring.k0 / mech.mass,
            max_relative = 1e-12
        );
    }

    #[test]
    fn optical_spring_signs_and_expansion() {
        let mech = MechanicalParams::new(1.0, 10.0, 0.0, 0.0).unwrap();
        let omega_0 = OpticalParams::omega_from_wavelength(1064e-9);
        let power = OpticalParams::power_for_theta(1000.0, mech.mass, 1.0, omega_0);
        // Tuned: K identically zero.
        let opt0 = OpticalParams::new(omega_0, 0.0, 1000.0, 1.0, power).unwrap();
        let s0 = optical_spring(&opt0, &mech, 500.0);
        assert_eq!(s0.k0, 0.0);
        assert_eq!(s0.k_full, Complex64::new(0.0, 0.0));
        // Blue detuned: restoring + anti-damping.
        let optb = OpticalParams::new(omega_0, -1500.0, 1000.0, 1.0, power).unwrap();
        let sb = optical_spring(&optb, &mech, 0.0);
        assert!(sb.k0 > 0.0 && sb.k1 > 0.0);
        // Exact K at omega_m agrees with the low-frequency expansion to
        // first order when omega_m / sqrt(D^2+g^2) = 1e-3.
        let scale = (optb.detuning.powi(2) + optb.gamma.powi(2)).sqrt();
        let wm = 1e-3 * scale;
        let exact = optical_spring(&optb, &mech, wm).k_full;
        let approx = Complex64::new(sb.k0, wm * sb.k1);
        assert_relative_eq!(exact.re, approx.re, max_relative = 1e-5);
        assert_relative_eq!(exact.im, approx.im, max_relative = 1e-5);
    }

    proptest! {
        #[test]
        fn spring_sign_law(theta in 10.0..1e4f64, gamma in 10.0..1e4f64,
                           delta in prop::sample::select(vec![-3000.0, -500.0, 250.0, 4000.0])) {
            let mech = MechanicalParams::free_mass(1.0);
            let omega_0 = OpticalParams::omega_from_wavelength(1064e-9);
            let power = OpticalParams::power_for_theta(theta, mech.mass, 1.0, omega_0);
            let opt = OpticalParams::new(omega_0, delta, gamma, 1.0, power).unwrap();
            let s = optical_spring(&opt, &mech, 0.0);
            prop_assert!(s.k0 * delta < 0.0);
            prop_assert!(s.k1 * delta < 0.0);
        }
    }

    #[test]
    fn double_spring_cases() {
        let mech = MechanicalParams::new(1.0, 50.0, 1.0, 0.0).unwrap();
        let zero = OpticalSpring { k0: 0.0, k1: 0.0, k_full: Complex64::new(0.0, 0.0) };
        assert!(double_spring_stability(&zero, &zero, &mech).stable);
        // One blue-detuned spring on a free mass: anti-damped, unstable.
        let free = MechanicalParams::free_mass(1.0);
        let omega_0 = OpticalParams::omega_from_wavelength(1064e-9);
        let power = OpticalParams::power_for_theta(800.0, 1.0, 1.0, omega_0);
        let blue = OpticalParams::new(omega_0, -1200.0, 800.0, 1.0, power).unwrap();
        let sb = optical_spring(&blue, &free, 0.0);
        let verdict = double_spring_stability(&sb, &zero, &free);
        assert!(!verdict.stable);
        // Spring A: blue detuned at Delta = -1.5 gamma, strong restoring with
        // mild anti-damping. Spring B: red detuned, narrowband, small
        // anti-restoring K0 but damping strong enough to beat A's K1.
        let power_a = OpticalParams::power_for_theta(800.0, 1.0, 1.0, omega_0);
        let a = optical_spring(
            &OpticalParams::new(omega_0, -1.5 * 800.0, 800.0, 1.0, power_a).unwrap(),
            &free,
            0.0,
        );
        let theta_b = 5.2e6f64.cbrt();
        let power_b = OpticalParams::power_for_theta(theta_b, 1.0, 1.0, omega_0);
        let b = optical_spring(
            &OpticalParams::new(omega_0, 100.0, 100.0, 1.0, power_b).unwrap(),
            &free,
            0.0,
        );
        assert!(a.k0 > 0.0 && a.k1 > 0.0 && b.k0 < 0.0 && b.k1 < 0.0);
        assert!(!double_spring_stability(&a, &zero, &free).stable);
        assert!(!double_spring_stability(&b, &zero, &free).stable);
        let composite = double_spring_stability(&a, &b, &free);
        assert!(composite.stable, "composite should be stable: {composite:?}");
        // Oracle: both characteristic roots of s^2 + 2 g_eff s + w_eff^2 lie
        // strictly in the left half plane.
        let disc = Complex64::new(
            composite.effective_gamma * composite.effective_gamma - composite.effective_omega_sq,
            0.0,
        )
        .sqrt();
        for root in [-composite.effective_gamma + disc, -composite.effective_gamma - disc] {
            assert!(root.re < 0.0, "unstable root {root}");
        }
    }

    #[test]
    fn classical_budget_beating_factors() {
        let mech = MechanicalParams::free_mass(10.0);
        // Omega_x = 2 Omega_F: minimum ratio is exactly 1.
        let grid = crate::params::log_grid(1.0, 1e4, 400).unwrap();
        let m1 = MeasurementParams::new(100.0, FRAC_PI_2)
            .unwrap()
            .with_classical_noise(50.0, 100.0)
            .unwrap();
        let b1 = classical_noise_budget(&mech, &m1, &grid).unwrap();
        assert_relative_eq!(b1.min_classical_to_sql, 1.0, max_relative = 1e-3);
        // Omega_x = 50 Omega_F: min ratio 0.04 (amplitude beating factor 5),
        // achieved at sqrt(Omega_F Omega_x).
        let m2 = MeasurementParams::new(100.0, FRAC_PI_2)
            .unwrap()
            .with_classical_noise(10.0, 500.0)
            .unwrap();
        let b2 = classical_noise_budget(&mech, &m2, &grid).unwrap();
        assert_relative_eq!(b2.min_classical_to_sql, 0.04, max_relative = 1e-3);
        assert_relative_eq!(b2.min_classical_to_sql, classical_sql_beating(10.0, 500.0), max_relative = 1e-3);
        assert_relative_eq!(b2.argmin_omega, (10.0f64 * 500.0).sqrt(), max_relative = 0.02);
        // Budget sums and dominance.
        for i in 0..grid.len() {
            let sum = b2.shot.values[i]
                + b2.back_action.values[i]
                + b2.force_classical.values[i]
                + b2.sensing_classical.values[i];
            assert_relative_eq!(b2.total.values[i], sum, max_relative = 1e-12);
            assert!(b2.total.values[i] >= b2.force_classical.values[i]);
        }
    }

    #[test]
    fn sideband_asymmetry_zero_point() {
        // Zero-point oscillator: S_x = 2 hbar Im chi makes the red-detuned
        // output pure sensing noise and the blue-detuned one S_Z + 2 a^2 S_x.
        let (s_z, alpha) = (0.7, 3.0);
        let im_chi = 0.4 / HBAR;
        let s_x = 2.0 * HBAR * im_chi;
        let (minus, plus) = sideband_asymmetry(s_z, alpha, s_x, im_chi);
        assert_relative_eq!(minus, s_z, max_relative = 1e-12);
        assert_relative_eq!(plus, s_z + 2.0 * alpha * alpha * s_x, max_relative = 1e-12);
    }

    #[test]
    fn occupation_from_areas() {
        assert_relative_eq!(asymmetry_occupation(1.0, 2.0).unwrap(), 1.0);
        // Formula inversion: 1/n = I-/I+ - 1.
        let n = asymmetry_occupation(1.0, 1.1).unwrap();
        assert_relative_eq!(n, 10.0, max_relative = 1e-10);
        assert_relative_eq!(1.0 / n, 1.1 / 1.0 - 1.0, max_relative = 1e-10);
        assert!(asymmetry_occupation(1.0, 0.9).is_err());
        assert!(asymmetry_occupation(1.0, 1.0).is_err());
    }

    #[test]
    fn pondero_requirements() {
        let r0 = pondero_squeeze_requirements(0.0).unwrap();
        assert_eq!(r0.omega_opt_over_omega_q, 1.0);
        assert_eq!(r0.omega_f_bound_over_omega_opt, 1.0);
        // 3 dB target: e^{-2q} = 0.5.
        let q3 = 0.5 * 2f64.ln();
        let r3 = pondero_squeeze_requirements(q3).unwrap();
        assert!(r3.omega_opt_over_omega_q < 1.0);
        assert_relative_eq!(r3.omega_f_bound_over_omega_opt, 0.5, max_relative = 1e-12);
        // Small negative zeta squeezes the output below vacuum.
        let s = pondero_output_spectrum(100.0, 50.0, -0.01);
        assert!(s < 1.0);
        assert_relative_eq!(
            pondero_output_spectrum(100.0, 50.0, 1e-6),
            1.0 + 2.0 * (100.0f64 / 50.0).powi(2) * 1e-6,
            max_relative = 1e-4
        );
    }

    #[test]
    fn power_scaling_leaves_sql_invariant() {
        let g = 2.0 * PI * 100.0;
        let mech = MechanicalParams::free_mass(10.0);
        let opt = tuned_opt(g, g, mech.mass);
        let mut opt4 = opt;
        opt4.circulating_power *= 4.0;
        for &w in &[0.2 * g, g, 7.0 * g] {
            let k1 = kimble_factor(&opt, &mech, w).unwrap().k;
            let k4 = kimble_factor(&opt4, &mech, w).unwrap().k;
            assert_relative_eq!(k4, 4.0 * k1, max_relative = 1e-10);
            assert_relative_eq!(sql_force(&mech, w), sql_force(&mech, w));
        }
    }
}
