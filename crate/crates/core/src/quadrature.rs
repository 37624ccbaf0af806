//! Quadrature-field covariances: vacuum, squeezed and lossy inputs.
//!
//! In the two-photon formalism the amplitude/phase quadratures (a₁, a₂) of a
//! vacuum field have single-sided spectra S₁ = S₂ = 1, S₁₂ = 0. A squeezed
//! input is obtained by `(a₁, a₂) = R_φ S_r (n₁, n₂)` with the
//! counterclockwise rotation R_φ and S_r = diag(e^q, e^{-q}); optical loss ε
//! is a beam-splitter admixture of vacuum applied after squeezing.

use crate::{Error, Result};

/// Symmetric 2×2 covariance of the (a₁, a₂) quadrature pair, in vacuum units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureCovariance {
    pub s11: f64,
    pub s22: f64,
    pub s12: f64,
}

impl QuadratureCovariance {
    pub fn vacuum() -> Self {
        Self { s11: 1.0, s22: 1.0, s12: 0.0 }
    }

    /// Covariance of a squeezed field after lumped loss ε:
    /// `(1−ε)·R_φ diag(e^{2q}, e^{-2q}) R_φᵀ + ε·I`.
    pub fn squeezed(q: f64, phi: f64, loss: f64) -> Result<Self> {
        if q < 0.0 {
            return Err(Error::domain("squeezed_quadrature_spectra", "q must be nonnegative"));
        }
        if !(0.0..=1.0).contains(&loss) {
            return Err(Error::domain("squeezed_quadrature_spectra", "loss must lie in [0, 1]"));
        }
        let (c, s) = (phi.cos(), phi.sin());
        let (ep, em) = ((2.0 * q).exp(), (-2.0 * q).exp());
        let t = 1.0 - loss;
        Ok(Self {
            s11: t * (c * c * ep + s * s * em) + loss,
            s22: t * (s * s * ep + c * c * em) + loss,
            s12: t * c * s * (ep - em),
        })
    }

    pub fn det(&self) -> f64 {
        self.s11 * self.s22 - self.s12 * self.s12
    }
}

/// Spectra (S_a1, S_a2, S_a1a2) of the vacuum input field.
pub fn vacuum_quadrature_spectra() -> (f64, f64, f64) {
    (1.0, 1.0, 0.0)
}

/// Spectra (S_a1, S_a2, S_a1a2) of a squeezed input after loss ε.
pub fn squeezed_quadrature_spectra(q: f64, phi: f64, loss: f64) -> Result<(f64, f64, f64)> {
    let c = QuadratureCovariance::squeezed(q, phi, loss)?;
    Ok((c.s11, c.s22, c.s12))
}
