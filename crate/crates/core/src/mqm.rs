//! Macroscopic-quantum-mechanics test observables: gravity-decoherence
//! timescales with lattice mass concentration, and the Schrödinger–Newton
//! frequency split of the center of mass.

use crate::consts::G_NEWTON;
use crate::{Error, Result};

/// Crystal material constants entering the self-gravity scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    /// Bulk density ρ₀, kg/m³.
    pub density: f64,
    /// Atomic mass, kg.
    pub atomic_mass: f64,
    /// Zero-point lattice spread Δx_zp along each axis, m.
    pub delta_x_zp: f64,
}

impl MaterialParams {
    pub fn new(density: f64, atomic_mass: f64, delta_x_zp: f64) -> Result<Self> {
        if !(density > 0.0) || !(atomic_mass > 0.0) || !(delta_x_zp > 0.0) {
            return Err(Error::domain("MaterialParams", "all parameters must be positive"));
        }
        Ok(Self { density, atomic_mass, delta_x_zp })
    }

    /// Silicon crystal cooled well below its Debye temperature:
    /// ρ₀ = 2.3×10³ kg/m³ and Λ ≈ 8.3×10³.
    pub fn silicon() -> Self {
        let density = 2.3e3;
        let atomic_mass = 28.0855 * 1.660_539_066_6e-27;
        let lambda_target = 8.3e3;
        let dx3 = atomic_mass / (12.0 * std::f64::consts::PI.sqrt() * density * lambda_target);
        Self { density, atomic_mass, delta_x_zp: dx3.cbrt() }
    }

    /// Mass-concentration factor `Λ = m/(12√π ρ₀ Δx_zp³)`.
    pub fn lambda_concentration(&self) -> f64 {
        self.atomic_mass
            / (12.0 * std::f64::consts::PI.sqrt() * self.density * self.delta_x_zp.powi(3))
    }

    /// Schrödinger–Newton interaction scale per unit mass,
    /// `𝒞/M = GΛρ₀ = Gm/(12√π Δx_zp³)`.
    pub fn sn_coupling_per_mass(&self) -> f64 {
        G_NEWTON * self.lambda_concentration() * self.density
    }
}

/// Gravity-decoherence cycle count and self-consistent threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GravityDecoherence {
    /// Ω_q τ = (1/Λ)·(Ω_q/√(Gρ₀))², the number of oscillation cycles before
    /// gravity decoheres a vacuum-scale superposition.
    pub cycles: f64,
    /// Measurement timescale 1/Ω_q at which cycles = 1: `1/√(ΛGρ₀)`, s.
    pub threshold_time: f64,
}

/// Cycle count at measurement frequency Ω_q for uniform density ρ₀ with
/// lattice concentration Λ (pass Λ = 1 for the homogeneous estimate).
pub fn gravity_decoherence_cycles(
    omega_q: f64,
    density: f64,
    lambda: f64,
) -> Result<GravityDecoherence> {
    if !(omega_q > 0.0) || !(density > 0.0) || !(lambda > 0.0) {
        return Err(Error::domain("gravity_decoherence_cycles", "inputs must be positive"));
    }
    let g_rho = (G_NEWTON * density).sqrt();
    Ok(GravityDecoherence {
        cycles: (omega_q / g_rho).powi(2) / lambda,
        threshold_time: 1.0 / (lambda.sqrt() * g_rho),
    })
}

/// Schrödinger–Newton split of the center-of-mass dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnSplit {
    /// ω_SN = √(GΛρ₀), rad/s.
    pub omega_sn: f64,
    /// Quantum-uncertainty rotation frequency ω_q = √(ω_c² + ω_SN²).
    pub omega_q_sn: f64,
    /// Quality factor needed to resolve the two peaks: (ω_c/ω_SN)².
    pub required_q: f64,
}

/// Frequency split between classical motion (at trap frequency ω_c) and
/// quantum-uncertainty rotation (at ω_q = √(ω_c² + 𝒞/M)).
pub fn sn_frequency_split(omega_c: f64, material: &MaterialParams) -> Result<SnSplit> {
    if !(omega_c > 0.0) {
        return Err(Error::domain("sn_frequency_split", "omega_c must be positive"));
    }
    let omega_sn_sq = material.sn_coupling_per_mass();
    let omega_sn = omega_sn_sq.sqrt();
    Ok(SnSplit {
        omega_sn,
        omega_q_sn: (omega_c * omega_c + omega_sn_sq).sqrt(),
        required_q: omega_c * omega_c / omega_sn_sq,
    })
}

/// The silicon-at-10-K benchmark requirement `Q > 3×10⁶·(10 Hz/f_c)²`.
pub fn silicon_benchmark_q(f_c: f64) -> f64 {
    3e6 * (10.0 / f_c).powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn silicon_lambda_matches_quoted_value() {
        let si = MaterialParams::silicon();
        assert_relative_eq!(si.lambda_concentration(), 8.3e3, max_relative = 1e-10);
        // Zero-point spread comes out at a few picometres.
        assert!(si.delta_x_zp > 1e-12 && si.delta_x_zp < 1e-11);
    }

    #[test]
    fn lambda_recomputation_is_consistent() {
        let m = MaterialParams::new(4.0e3, 5.0e-26, 6.0e-12).unwrap();
        let lam = m.lambda_concentration();
        let rebuilt =
            m.atomic_mass / (12.0 * std::f64::consts::PI.sqrt() * m.density * m.delta_x_zp.powi(3));
        assert_relative_eq!(lam, rebuilt, max_relative = 1e-12);
        // Dimensional identity C/M = G Λ ρ₀.
        assert_relative_eq!(
            m.sn_coupling_per_mass(),
            G_NEWTON * lam * m.density,
            max_relative = 1e-12
        );
    }

    #[test]
    fn decoherence_thresholds() {
        let si = MaterialParams::silicon();
        // √(Gρ₀) ≈ 4×10⁻⁴ 1/s; homogeneous threshold 1/Ω_q ≈ 2.5×10³ s.
        let g_rho = (G_NEWTON * si.density).sqrt();
        assert_relative_eq!(g_rho, 4e-4, max_relative = 0.05);
        let hom = gravity_decoherence_cycles(1.0, si.density, 1.0).unwrap();
        assert_relative_eq!(hom.threshold_time, 2.5e3, max_relative = 0.05);
        // Lattice-concentrated: ≈ 28 s.
        let lat = gravity_decoherence_cycles(1.0, si.density, si.lambda_concentration()).unwrap();
        assert_relative_eq!(lat.threshold_time, 28.0, max_relative = 0.05);
        // Λ = 1 recovers the homogeneous cycle count; threshold ∝ Λ^{-1/2}.
        assert_relative_eq!(
            hom.threshold_time / lat.threshold_time,
            si.lambda_concentration().sqrt(),
            max_relative = 1e-12
        );
        // Exactly one cycle at the threshold.
        let at = gravity_decoherence_cycles(1.0 / lat.threshold_time, si.density, si.lambda_concentration())
            .unwrap();
        assert_relative_eq!(at.cycles, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn sn_split_benchmarks() {
        let si = MaterialParams::silicon();
        let f_c = 10.0;
        let omega_c = 2.0 * std::f64::consts::PI * f_c;
        let s = sn_frequency_split(omega_c, &si).unwrap();
        // ω_SN = 0.036 1/s within 3%.
        assert_relative_eq!(s.omega_sn, 0.036, max_relative = 0.03);
        // Q requirement ≈ 3×10⁶ at f_c = 10 Hz.
        assert_relative_eq!(s.required_q, 3e6, max_relative = 0.1);
        assert_relative_eq!(s.required_q, silicon_benchmark_q(f_c), max_relative = 0.1);
        // No coupling: no split.
        let none = MaterialParams { delta_x_zp: 1.0, ..si };
        let s0 = sn_frequency_split(omega_c, &none).unwrap();
        assert_relative_eq!(s0.omega_q_sn, omega_c, max_relative = 1e-9);
    }
}
