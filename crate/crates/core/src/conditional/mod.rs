//! Conditional Gaussian states under continuous position measurement:
//! Riccati moment evolution, closed-form steady states, classical-noise
//! covariances, purity figures of merit, and causal Wiener filtering.

pub mod poly;
pub mod ratfn;
pub mod wiener;

use crate::consts::HBAR;
use crate::params::{GaussianState, MeasurementParams, MechanicalParams};
use crate::{ode, Error, Result};

/// Conditional second moments along a Riccati trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiState {
    pub t: f64,
    pub v_xx: f64,
    pub v_xp: f64,
    pub v_pp: f64,
}

/// Information-gain coefficient `2α² = 2MΩ_q²/ħ` of a position measurement
/// with strength Ω_q (interaction `V_I = −ħα x̂ â₁`, `α² = MΩ_q²/ħ`).
pub fn info_rate(mass: f64, omega_q: f64) -> f64 {
    2.0 * mass * omega_q * omega_q / HBAR
}

/// Back-action momentum diffusion `ħ²α²/2 = ħMΩ_q²/2` of the same coupling.
pub fn back_action_diffusion(mass: f64, omega_q: f64) -> f64 {
    HBAR * mass * omega_q * omega_q / 2.0
}

/// Right-hand side of the conditional-covariance Riccati equations:
///
/// ```text
/// V̇_xx = 2V_xp/M            − (2MΩ_q²/ħ) V_xx²
/// V̇_xp = V_pp/M − Mω_m²V_xx − (2MΩ_q²/ħ) V_xx V_xp
/// V̇_pp = −2Mω_m²V_xp + ħMΩ_q²/2 − (2MΩ_q²/ħ) V_xp²
/// ```
pub fn riccati_rhs(
    state: &RiccatiState,
    mech: &MechanicalParams,
    omega_q: f64,
) -> (f64, f64, f64) {
    let m = mech.mass;
    let w2 = mech.omega_m * mech.omega_m;
    let info = info_rate(m, omega_q);
    let diff = back_action_diffusion(m, omega_q);
    (
        2.0 * state.v_xp / m - info * state.v_xx * state.v_xx,
        state.v_pp / m - m * w2 * state.v_xx - info * state.v_xx * state.v_xp,
        -2.0 * m * w2 * state.v_xp + diff - info * state.v_xp * state.v_xp,
    )
}

/// Closed-form steady state of the Riccati equations, with Λ = Ω_q/ω_m:
///
/// ```text
/// V_xx = ħ/(√2 M ω_m) · 1/√(1+√(1+Λ⁴))
/// V_xp = (ħ/2) · Λ²/(1+√(1+Λ⁴))
/// V_pp = (ħMω_m/√2) · √(1+Λ⁴)/√(1+√(1+Λ⁴))
/// ```
///
/// Always a pure state: `V_xx V_pp − V_xp² = ħ²/4`.
pub fn riccati_steady_state(mech: &MechanicalParams, omega_q: f64) -> Result<GaussianState> {
    if mech.omega_m == 0.0 {
        return Err(Error::domain(
            "riccati_steady_state",
            "omega_m = 0; use riccati_steady_state_free_mass",
        ));
    }
    let lam2 = (omega_q / mech.omega_m).powi(2);
    let s = (1.0 + lam2 * lam2).sqrt();
    let root = (1.0 + s).sqrt();
    let m = mech.mass;
    let wm = mech.omega_m;
    Ok(GaussianState {
        mean_x: 0.0,
        mean_p: 0.0,
        v_xx: HBAR / (2f64.sqrt() * m * wm) / root,
        v_xp: 0.5 * HBAR * lam2 / (1.0 + s),
        v_pp: HBAR * m * wm / 2f64.sqrt() * s / root,
    })
}

/// Strong-measurement (free-mass) steady state: `V_xx = ħ/(√2MΩ_q)`,
/// `V_xp = ħ/2`, `V_pp = ħMΩ_q/√2`. An exact fixed point of the ω_m = 0
/// Riccati equations.
pub fn riccati_steady_state_free_mass(mass: f64, omega_q: f64) -> GaussianState {
    GaussianState {
        mean_x: 0.0,
        mean_p: 0.0,
        v_xx: HBAR / (2f64.sqrt() * mass * omega_q),
        v_xp: 0.5 * HBAR,
        v_pp: HBAR * mass * omega_q / 2f64.sqrt(),
    }
}

/// Steady state for general white force/sensing intensities.
///
/// `q_diff` is the momentum diffusion (half the single-sided force spectrum,
/// `S_FF/2`) and `r_sens` the sensing intensity (`S_ZZ/2`, displacement
/// referred). Solves the undamped algebraic Riccati equation in closed form.
pub fn riccati_steady_state_general(
    mass: f64,
    omega_m: f64,
    q_diff: f64,
    r_sens: f64,
) -> Result<(f64, f64, f64)> {
    if !(q_diff > 0.0) || !(r_sens > 0.0) {
        return Err(Error::domain("riccati_steady_state_general", "need positive noise levels"));
    }
    let m = mass;
    let mw2 = m * omega_m * omega_m;
    let v_xp = r_sens * (-mw2 + (mw2 * mw2 + q_diff / r_sens).sqrt());
    let v_xx = (2.0 * r_sens * v_xp / m).sqrt();
    let v_pp = m * v_xx * (mw2 + v_xp / r_sens);
    Ok((v_xx, v_xp, v_pp))
}

/// Steady state of the damped oscillator Riccati equation
/// (`ṗ = −Mω²x − 2γp + F`). Reduces to a scalar quartic in V_xx with a
/// single positive root, found by bisection and polished by Newton.
pub fn riccati_steady_state_damped(
    mass: f64,
    omega_m: f64,
    gamma: f64,
    q_diff: f64,
    r_sens: f64,
) -> Result<(f64, f64, f64)> {
    if gamma == 0.0 {
        return riccati_steady_state_general(mass, omega_m, q_diff, r_sens);
    }
    if !(q_diff > 0.0) || !(r_sens > 0.0) || gamma < 0.0 {
        return Err(Error::domain("riccati_steady_state_damped", "invalid noise or damping"));
    }
    let m2 = mass * mass;
    let w2 = omega_m * omega_m;
    // Quartic in u = V_xx (all coefficients positive except the constant):
    // M²u⁴/(4R³) + 2M²γu³/R² + M²(ω²+4γ²)u²/R + 4γM²ω²u − Q = 0.
    let c4 = m2 / (4.0 * r_sens.powi(3));
    let c3 = 2.0 * m2 * gamma / (r_sens * r_sens);
    let c2 = m2 * (w2 + 4.0 * gamma * gamma) / r_sens;
    let c1 = 4.0 * gamma * m2 * w2;
    let c0 = -q_diff;
    let f = |u: f64| (((c4 * u + c3) * u + c2) * u + c1) * u + c0;
    let df = |u: f64| ((4.0 * c4 * u + 3.0 * c3) * u + 2.0 * c2) * u + c1;
    // Bracket: the undamped solution bounds V_xx from above (damping only
    // removes uncertainty).
    let (u0, _, _) = riccati_steady_state_general(mass, omega_m, q_diff, r_sens)?;
    let mut hi = u0 * 2.0;
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    let (mut lo, mut hi) = (0.0_f64, hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut u = 0.5 * (lo + hi);
    for _ in 0..8 {
        u -= f(u) / df(u);
    }
    let v_xx = u;
    let v_xp = mass * v_xx * v_xx / (2.0 * r_sens);
    let v_pp = m2 * w2 * v_xx + 2.0 * mass * gamma * v_xp + mass * v_xx * v_xp / r_sens;
    Ok((v_xx, v_xp, v_pp))
}

/// Integrate the Riccati equations from an initial covariance.
pub fn riccati_evolve(
    initial: &RiccatiState,
    mech: &MechanicalParams,
    omega_q: f64,
    duration: f64,
) -> Result<RiccatiState> {
    let m = *mech;
    let f = move |_t: f64, y: &[f64]| {
        let st = RiccatiState { t: 0.0, v_xx: y[0], v_xp: y[1], v_pp: y[2] };
        let (a, b, c) = riccati_rhs(&st, &m, omega_q);
        vec![a, b, c]
    };
    // Relative tolerance 1e-10; the equation stiffens for Λ ≫ 1, handled by
    // the step controller keying on Ω_q through the RHS scale.
    let atol = 1e-14 * (initial.v_xx.abs() + HBAR / (mech.mass * omega_q.max(mech.omega_m)));
    let y = ode::integrate(
        f,
        0.0,
        duration,
        &[initial.v_xx, initial.v_xp, initial.v_pp],
        1e-10,
        atol,
    )?;
    Ok(RiccatiState { t: initial.t + duration, v_xx: y[0], v_xp: y[1], v_pp: y[2] })
}

/// Purity and entropy figures of merit of a Gaussian covariance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalFoM {
    /// U = (2/ħ)√(V_xx V_pp − V_xp²) ≥ 1.
    pub purity_u: f64,
    /// Linear entropy 1 − 1/U.
    pub linear_entropy: f64,
    /// Effective occupation U/2 − 1/2.
    pub n_eff: f64,
    /// Von Neumann entropy (N+1)ln(N+1) − N ln N.
    pub von_neumann: f64,
}

impl ConditionalFoM {
    pub fn from_purity(u: f64) -> Result<Self> {
        if u < 1.0 - 1e-9 {
            return Err(Error::unphysical("ConditionalFoM", format!("purity U = {u} < 1")));
        }
        let u = u.max(1.0);
        let n = 0.5 * (u - 1.0);
        let s_vn = if n > 0.0 { (n + 1.0) * (n + 1.0).ln() - n * n.ln() } else { 0.0 };
        Ok(Self { purity_u: u, linear_entropy: 1.0 - 1.0 / u, n_eff: n, von_neumann: s_vn })
    }

    pub fn from_covariance(v_xx: f64, v_xp: f64, v_pp: f64) -> Result<Self> {
        let det = v_xx * v_pp - v_xp * v_xp;
        if det < 0.0 {
            return Err(Error::unphysical("ConditionalFoM", "negative covariance determinant"));
        }
        Self::from_purity(2.0 / HBAR * det.sqrt())
    }
}

/// Conditional state of a broadband position measurement with classical
/// force and sensing noise (free-mass regime Ω_q ≫ ω_m).
#[derive(Debug, Clone, Copy)]
pub struct NoisyConditionalState {
    pub v_xx: f64,
    pub v_xp: f64,
    pub v_pp: f64,
    pub fom: ConditionalFoM,
    /// Best achievable occupation over Ω_q: 𝒩_eff^min = Ω_F/Ω_x.
    pub n_eff_min: f64,
    /// Measurement strength achieving it: Ω_q = √(Ω_F Ω_x).
    pub omega_q_opt: f64,
    /// Set when Ω_q < 10 ω_m, outside the quoted regime of the closed forms.
    pub regime_warning: bool,
    /// Set when Ω_F ≥ Ω_x (no sub-SQL window).
    pub no_window_warning: bool,
}

/// Closed-form conditional covariances with classical noise:
///
/// ```text
/// V_xx = ħ/(√2MΩ_q)·(1+2ξ_x²)^{3/4}(1+2ξ_F²)^{1/4}
/// V_xp = (ħ/2)·√((1+2ξ_x²)(1+2ξ_F²))
/// V_pp = (ħMΩ_q/√2)·(1+2ξ_x²)^{1/4}(1+2ξ_F²)^{3/4}
/// ```
///
/// with ξ_F = Ω_F/Ω_q and ξ_x = Ω_q/Ω_x.
pub fn conditional_covariance_with_noise(
    mech: &MechanicalParams,
    meas: &MeasurementParams,
) -> Result<NoisyConditionalState> {
    if !(meas.omega_q > 0.0) {
        return Err(Error::domain("conditional_covariance_with_noise", "omega_q must be positive"));
    }
    let xf = meas.xi_f();
    let xx = if meas.omega_x.is_finite() { meas.xi_x() } else { 0.0 };
    let fx = 1.0 + 2.0 * xx * xx;
    let ff = 1.0 + 2.0 * xf * xf;
    let m = mech.mass;
    let oq = meas.omega_q;
    let v_xx = HBAR / (2f64.sqrt() * m * oq) * fx.powf(0.75) * ff.powf(0.25);
    let v_xp = 0.5 * HBAR * (fx * ff).sqrt();
    let v_pp = HBAR * m * oq / 2f64.sqrt() * fx.powf(0.25) * ff.powf(0.75);
    let fom = ConditionalFoM::from_covariance(v_xx, v_xp, v_pp)?;
    let (n_eff_min, omega_q_opt) = if meas.omega_x.is_finite() && meas.omega_f > 0.0 {
        (meas.omega_f / meas.omega_x, (meas.omega_f * meas.omega_x).sqrt())
    } else {
        (0.0, f64::INFINITY)
    };
    Ok(NoisyConditionalState {
        v_xx,
        v_xp,
        v_pp,
        fom,
        n_eff_min,
        omega_q_opt,
        regime_warning: meas.omega_q < 10.0 * mech.omega_m,
        no_window_warning: meas.omega_f >= meas.omega_x,
    })
}

/// Purity from white measurement-noise spectra: `U = √(S_ZZ S_FF − S_ZF²)/ħ`.
/// Valid for any ω_m.
pub fn purity_from_spectra(s_zz: f64, s_ff: f64, s_zf: f64) -> Result<f64> {
    let det = s_zz * s_ff - s_zf * s_zf;
    if det < 0.0 {
        return Err(Error::unphysical("purity_from_spectra", "negative spectral determinant"));
    }
    let u = det.sqrt() / HBAR;
    if u < 1.0 - 1e-9 {
        return Err(Error::unphysical(
            "purity_from_spectra",
            format!("spectra below the Heisenberg bound (U = {u})"),
        ));
    }
    Ok(u.max(1.0))
}

/// Leading-order occupation from finite cavity bandwidth:
/// `𝒩_eff ≈ Ω_q^cav/(4√2 γ)`, valid for Ω_q^cav ≲ γ.
pub fn cavity_bandwidth_occupation(omega_q_cav: f64, gamma: f64) -> Result<(f64, bool)> {
    if !(gamma > 0.0) {
        return Err(Error::domain("cavity_bandwidth_occupation", "gamma must be positive"));
    }
    let n = omega_q_cav / (4.0 * 2f64.sqrt() * gamma);
    Ok((n, omega_q_cav > gamma))
}
