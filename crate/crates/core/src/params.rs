//! Physical parameter sets of the strawman optomechanical system and the
//! Gaussian-state / spectrum value types shared by all modules.

use crate::consts::{C_LIGHT, HBAR};
use crate::{Error, Result};

/// Mechanical oscillator: mass, eigenfrequency, damping and bath temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MechanicalParams {
    /// Mass, kg.
    pub mass: f64,
    /// Eigenfrequency ω_m, rad/s (0 for a free mass).
    pub omega_m: f64,
    /// Velocity damping rate γ_m, rad/s.
    pub gamma_m: f64,
    /// Bath temperature, K.
    pub temperature: f64,
}

impl MechanicalParams {
    pub fn new(mass: f64, omega_m: f64, gamma_m: f64, temperature: f64) -> Result<Self> {
        if !(mass > 0.0) {
            return Err(Error::domain("MechanicalParams", "mass must be positive"));
        }
        if omega_m < 0.0 || gamma_m < 0.0 || temperature < 0.0 {
            return Err(Error::domain(
                "MechanicalParams",
                "omega_m, gamma_m and temperature must be nonnegative",
            ));
        }
        Ok(Self { mass, omega_m, gamma_m, temperature })
    }

    /// Free mass: ω_m = γ_m = 0.
    pub fn free_mass(mass: f64) -> Self {
        Self { mass, omega_m: 0.0, gamma_m: 0.0, temperature: 0.0 }
    }

    /// Quality factor Q_m = ω_m / (2 γ_m).
    pub fn quality_factor(&self) -> f64 {
        self.omega_m / (2.0 * self.gamma_m)
    }
}

/// Pumped cavity: carrier, detuning, bandwidth, geometry and power.
///
/// Derived coupling quantities follow the chain `g = ω_c/L`,
/// `ℰ = 2 I_c L / c = ħ ω₀ Ā²`, `G = Ā g`, and the characteristic frequency
/// `Θ³ = 4 ω₀ I_c / (M L c)` of the radiation-pressure coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalParams {
    /// Carrier angular frequency ω₀, rad/s.
    pub omega_0: f64,
    /// Cavity detuning Δ = ω_c − ω₀, rad/s.
    pub detuning: f64,
    /// Cavity half-bandwidth γ, rad/s.
    pub gamma: f64,
    /// Cavity length L, m.
    pub length: f64,
    /// Circulating power I_c, W.
    pub circulating_power: f64,
}

impl OpticalParams {
    pub fn new(
        omega_0: f64,
        detuning: f64,
        gamma: f64,
        length: f64,
        circulating_power: f64,
    ) -> Result<Self> {
        if !(gamma > 0.0) || !(length > 0.0) {
            return Err(Error::domain("OpticalParams", "gamma and length must be positive"));
        }
        if circulating_power < 0.0 {
            return Err(Error::domain("OpticalParams", "circulating power must be nonnegative"));
        }
        Ok(Self { omega_0, detuning, gamma, length, circulating_power })
    }

    /// Carrier frequency from vacuum wavelength, rad/s.
    pub fn omega_from_wavelength(lambda: f64) -> f64 {
        2.0 * std::f64::consts::PI * C_LIGHT / lambda
    }

    /// Parametric coupling g = ω_c/L ≈ ω₀/L, rad/(s·m).
    pub fn g_coupling(&self) -> f64 {
        (self.omega_0 + self.detuning) / self.length
    }

    /// Mean intracavity amplitude Ā from the stored energy ℰ = 2 I_c L/c.
    pub fn mean_amplitude(&self) -> f64 {
        (2.0 * self.circulating_power * self.length / (C_LIGHT * HBAR * self.omega_0)).sqrt()
    }

    /// Linearized optomechanical coupling G = Ā g.
    pub fn big_g(&self) -> f64 {
        self.mean_amplitude() * self.g_coupling()
    }

    /// Θ³ = 2ħG²/M, rad³/s³. Identical to `theta_cubed_from_power` up to the
    /// (ω_c/ω₀)² ratio, which is 1 for a tuned cavity.
    pub fn theta_cubed(&self, mass: f64) -> f64 {
        let g = self.big_g();
        2.0 * HBAR * g * g / mass
    }

    /// Θ³ = 4 ω₀ I_c / (M L c), rad³/s³.
    pub fn theta_cubed_from_power(&self, mass: f64) -> f64 {
        4.0 * self.omega_0 * self.circulating_power / (mass * self.length * C_LIGHT)
    }

    /// Circulating power that realizes a given Θ, via Θ³ = 4 ω₀ I_c/(M L c).
    pub fn power_for_theta(theta: f64, mass: f64, length: f64, omega_0: f64) -> f64 {
        theta.powi(3) * mass * length * C_LIGHT / (4.0 * omega_0)
    }
}

/// Continuous-measurement parameters: strength, readout angle, classical-noise
/// corner frequencies, input squeezing and optical loss.
///
/// The measurement frequency Ω_q is defined through the coupling strength via
/// `α² = M Ω_q²/ħ`; classical force and sensing noise are white with
/// `S_nF = 2ħM Ω_F²` (N²/Hz) and `S_nx = 2ħ/(M Ω_x²)` (m²/Hz), so that they
/// cross the free-mass SQL at Ω_F and Ω_x respectively.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementParams {
    /// Measurement frequency Ω_q, rad/s.
    pub omega_q: f64,
    /// Homodyne angle ζ of the detected quadrature b_ζ = b₁cosζ + b₂sinζ.
    pub zeta: f64,
    /// Classical force-noise corner Ω_F, rad/s (0 = none).
    pub omega_f: f64,
    /// Classical sensing-noise corner Ω_x, rad/s (∞ = none).
    pub omega_x: f64,
    /// Squeeze factor q ≥ 0 (power squeeze factor e^{-2q}).
    pub squeeze_q: f64,
    /// Squeeze angle φ, rad.
    pub squeeze_angle: f64,
    /// Optical loss ε ∈ [0, 1].
    pub loss: f64,
}

impl MeasurementParams {
    pub fn new(omega_q: f64, zeta: f64) -> Result<Self> {
        if omega_q < 0.0 {
            return Err(Error::domain("MeasurementParams", "omega_q must be nonnegative"));
        }
        Ok(Self {
            omega_q,
            zeta,
            omega_f: 0.0,
            omega_x: f64::INFINITY,
            squeeze_q: 0.0,
            squeeze_angle: 0.0,
            loss: 0.0,
        })
    }

    pub fn with_classical_noise(mut self, omega_f: f64, omega_x: f64) -> Result<Self> {
        if omega_f < 0.0 || omega_x <= 0.0 {
            return Err(Error::domain(
                "MeasurementParams",
                "omega_f must be nonnegative and omega_x positive",
            ));
        }
        self.omega_f = omega_f;
        self.omega_x = omega_x;
        Ok(self)
    }

    pub fn with_squeezing(mut self, q: f64, angle: f64) -> Result<Self> {
        if q < 0.0 {
            return Err(Error::domain("MeasurementParams", "squeeze factor q must be nonnegative"));
        }
        self.squeeze_q = q;
        self.squeeze_angle = angle;
        Ok(self)
    }

    pub fn with_loss(mut self, eps: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::domain("MeasurementParams", "loss must lie in [0, 1]"));
        }
        self.loss = eps;
        Ok(self)
    }

    /// ξ_F = Ω_F/Ω_q.
    pub fn xi_f(&self) -> f64 {
        self.omega_f / self.omega_q
    }

    /// ξ_x = Ω_q/Ω_x.
    pub fn xi_x(&self) -> f64 {
        self.omega_q / self.omega_x
    }
}

/// Units carried by a [`SpectrumCurve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumUnits {
    /// Displacement-referred, m²/Hz.
    MeterSquaredPerHz,
    /// Force-referred, N²/Hz.
    NewtonSquaredPerHz,
    /// Strain-referred, 1/Hz.
    StrainSquaredPerHz,
    /// Quadrature units, vacuum = 1.
    Dimensionless,
}

/// Single-sided spectral density sampled on a strictly increasing grid.
///
/// Values at exact resonances may be `f64::INFINITY`; writers are expected to
/// clip such sentinels rather than emit unparsable output.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumCurve {
    pub omega: Vec<f64>,
    pub values: Vec<f64>,
    pub units: SpectrumUnits,
}

impl SpectrumCurve {
    pub fn new(omega: Vec<f64>, values: Vec<f64>, units: SpectrumUnits) -> Result<Self> {
        if omega.len() != values.len() {
            return Err(Error::domain("SpectrumCurve", "grid and value lengths differ"));
        }
        if omega.is_empty() {
            return Err(Error::domain("SpectrumCurve", "empty grid"));
        }
        if omega.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain("SpectrumCurve", "grid must be strictly increasing"));
        }
        if values.iter().any(|v| v.is_nan() || *v < 0.0) {
            return Err(Error::unphysical("SpectrumCurve", "auto-spectrum values must be >= 0"));
        }
        Ok(Self { omega, values, units })
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }
}

/// Logarithmic frequency grid with a fixed number of points per decade.
pub fn log_grid(omega_min: f64, omega_max: f64, points_per_decade: usize) -> Result<Vec<f64>> {
    if !(omega_min > 0.0) || omega_max <= omega_min || points_per_decade == 0 {
        return Err(Error::domain("log_grid", "need 0 < omega_min < omega_max and points > 0"));
    }
    let decades = (omega_max / omega_min).log10();
    let n = (decades * points_per_decade as f64).ceil() as usize + 1;
    let step = decades / (n - 1) as f64;
    Ok((0..n).map(|i| omega_min * 10f64.powf(step * i as f64)).collect())
}

/// Uniform linear frequency grid.
pub fn linear_grid(omega_min: f64, omega_max: f64, n: usize) -> Result<Vec<f64>> {
    if omega_max <= omega_min || n < 2 {
        return Err(Error::domain("linear_grid", "need omega_min < omega_max and n >= 2"));
    }
    let step = (omega_max - omega_min) / (n - 1) as f64;
    Ok((0..n).map(|i| omega_min + step * i as f64).collect())
}

/// Gaussian state of one mechanical degree of freedom: first moments plus the
/// symmetric covariance block (V_xx, V_xp, V_pp).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    /// ⟨x⟩, m.
    pub mean_x: f64,
    /// ⟨p⟩, kg·m/s.
    pub mean_p: f64,
    pub v_xx: f64,
    pub v_xp: f64,
    pub v_pp: f64,
}

/// Relative slack allowed on the Heisenberg bound when validating states.
pub const HEISENBERG_REL_TOL: f64 = 1e-9;

impl GaussianState {
    /// Validated constructor: covariance must satisfy
    /// `V_xx V_pp − V_xp² ≥ ħ²/4` up to [`HEISENBERG_REL_TOL`].
    pub fn new(mean_x: f64, mean_p: f64, v_xx: f64, v_xp: f64, v_pp: f64) -> Result<Self> {
        if v_xx < 0.0 || v_pp < 0.0 {
            return Err(Error::unphysical("GaussianState", "negative variance"));
        }
        let det = v_xx * v_pp - v_xp * v_xp;
        let bound = HBAR * HBAR / 4.0;
        if det < bound * (1.0 - HEISENBERG_REL_TOL) {
            return Err(Error::unphysical(
                "GaussianState",
                format!("covariance determinant {det:e} below Heisenberg bound {bound:e}"),
            ));
        }
        Ok(Self { mean_x, mean_p, v_xx, v_xp, v_pp })
    }

    /// Ground state of an oscillator: V_xx = ħ/(2Mω), V_pp = ħMω/2.
    pub fn ground_state(mass: f64, omega: f64) -> Self {
        Self {
            mean_x: 0.0,
            mean_p: 0.0,
            v_xx: HBAR / (2.0 * mass * omega),
            v_xp: 0.0,
            v_pp: HBAR * mass * omega / 2.0,
        }
    }

    /// Determinant of the covariance block.
    pub fn det(&self) -> f64 {
        self.v_xx * self.v_pp - self.v_xp * self.v_xp
    }

    /// Purity parameter U = (2/ħ)·√det ≥ 1.
    pub fn purity_u(&self) -> f64 {
        2.0 / HBAR * self.det().sqrt()
    }
}
