//! Fluctuation–dissipation relations for thermal force noise.

use crate::consts::{HBAR, KB};
use crate::params::MechanicalParams;
use crate::{Error, Result};

/// Single-sided thermal force spectrum of a bath with damping rate γ_j and
/// temperature T_j: `S_F = 4 M γ_j ħ ω_m coth(ħω_m / 2k_B T_j)`, N²/Hz.
///
/// At T_j = 0 this reduces to `4 M γ_j ħ ω_m`. The ω_m = 0 case is singular;
/// callers that want the classical limit `8 M γ_j k_B T_j` must say so.
pub fn fdt_force_spectrum(mech: &MechanicalParams, gamma_j: f64, t_j: f64) -> Result<f64> {
    if gamma_j < 0.0 || t_j < 0.0 {
        return Err(Error::domain("fdt_force_spectrum", "gamma_j and T_j must be nonnegative"));
    }
    let prefactor = 4.0 * mech.mass * gamma_j * HBAR * mech.omega_m;
    if t_j == 0.0 {
        return Ok(prefactor);
    }
    if mech.omega_m == 0.0 {
        return Err(Error::domain(
            "fdt_force_spectrum",
            "coth singular at omega_m = 0 with T > 0; use fdt_force_spectrum_classical",
        ));
    }
    let x = HBAR * mech.omega_m / (2.0 * KB * t_j);
    Ok(prefactor / x.tanh())
}

/// Classical (high-temperature) limit `S_F = 8 M γ_j k_B T_j`, N²/Hz.
pub fn fdt_force_spectrum_classical(mass: f64, gamma_j: f64, t_j: f64) -> f64 {
    8.0 * mass * gamma_j * KB * t_j
}

/// Mean occupation of an oscillator at frequency ω_m in a bath at T_j.
pub fn occupation(omega_m: f64, t_j: f64) -> f64 {
    if t_j == 0.0 {
        return 0.0;
    }
    1.0 / ((HBAR * omega_m / (KB * t_j)).exp_m1())
}
