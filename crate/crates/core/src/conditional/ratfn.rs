//! Rational functions of the spectral variable Ω, with residue calculus.
//!
//! Time convention `x(t) = ∫ x̃(Ω) e^{-iΩt} dΩ/2π`: a simple fraction
//! `a/(Ω−p)` with `Im p < 0` is causal, `−i a e^{-ipt} Θ(t)`, while
//! `Im p > 0` is anticausal, `+i a e^{-ipt} Θ(−t)`.

use num_complex::Complex64;

use super::poly::Poly;
use crate::{Error, Result};

/// Ratio of two polynomials in Ω.
#[derive(Debug, Clone)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

/// One simple-pole term `coeff/(Ω − pole)`.
#[derive(Debug, Clone, Copy)]
pub struct PoleTerm {
    pub pole: Complex64,
    pub coeff: Complex64,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::domain("RatFn", "zero denominator"));
        }
        Ok(Self { num, den })
    }

    pub fn eval(&self, omega: Complex64) -> Complex64 {
        self.num.eval(omega) / self.den.eval(omega)
    }

    pub fn conj_coeffs(&self) -> RatFn {
        RatFn { num: self.num.conj_coeffs(), den: self.den.conj_coeffs() }
    }

    pub fn mul(&self, other: &RatFn) -> RatFn {
        RatFn { num: self.num.mul(&other.num), den: self.den.mul(&other.den) }
    }

    /// Residue of a simple pole: `num(p)/den'(p)`.
    pub fn residue(&self, pole: Complex64) -> Complex64 {
        self.num.eval(pole) / self.den.derivative().eval(pole)
    }

    /// Partial-fraction expansion assuming all denominator roots are simple.
    pub fn pole_terms(&self) -> Result<Vec<PoleTerm>> {
        if self.num.degree() >= self.den.degree() {
            return Err(Error::domain("RatFn::pole_terms", "improper rational function"));
        }
        let poles = self.den.roots()?;
        check_simple(&poles, "RatFn::pole_terms")?;
        Ok(poles
            .into_iter()
            .map(|p| PoleTerm { pole: p, coeff: self.residue(p) })
            .collect())
    }

    /// ∫_{-∞}^{+∞} R(Ω) dΩ/2π by closing in the upper half plane;
    /// requires deg(den) ≥ deg(num) + 2 and no real-axis poles.
    pub fn full_line_integral(&self) -> Result<Complex64> {
        if self.den.degree() < self.num.degree() + 2 {
            return Err(Error::domain("full_line_integral", "integrand decays too slowly"));
        }
        let poles = self.den.roots()?;
        check_simple(&poles, "full_line_integral")?;
        let scale = pole_scale(&poles);
        let mut acc = Complex64::new(0.0, 0.0);
        for p in poles {
            if p.im.abs() < 1e-12 * scale {
                return Err(Error::numerical("full_line_integral", "pole on the real axis"));
            }
            if p.im > 0.0 {
                acc += self.residue(p);
            }
        }
        Ok(Complex64::new(0.0, 1.0) * acc)
    }
}

fn check_simple(poles: &[Complex64], op: &'static str) -> Result<()> {
    let scale = pole_scale(poles);
    for (i, a) in poles.iter().enumerate() {
        for b in poles.iter().skip(i + 1) {
            if (a - b).norm() < 1e-9 * scale {
                return Err(Error::numerical(op, "repeated pole; simple poles required"));
            }
        }
    }
    Ok(())
}

fn pole_scale(poles: &[Complex64]) -> f64 {
    poles.iter().map(|p| p.norm()).fold(0.0f64, f64::max).max(1.0)
}

/// Causal time-domain signal `g(t) = Σ_k c_k e^{-i p_k t} Θ(t)` written as
/// the list of `(p_k, c_k)`; this is the inverse transform of
/// `Σ_k i c_k/(Ω − p_k)` with all poles in the lower half plane.
#[derive(Debug, Clone, Default)]
pub struct CausalSum {
    pub terms: Vec<(Complex64, Complex64)>,
}

impl CausalSum {
    /// From pole terms of a causal rational function (`Im p < 0`):
    /// `a/(Ω−p) ↔ −i a e^{-ipt}`.
    pub fn from_pole_terms(terms: &[PoleTerm]) -> Self {
        Self {
            terms: terms
                .iter()
                .map(|t| (t.pole, Complex64::new(0.0, -1.0) * t.coeff))
                .collect(),
        }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(p, c) in &self.terms {
            acc += c * (Complex64::new(0.0, -1.0) * p * t).exp();
        }
        acc
    }

    /// Slowest decay rate min_k(−Im p_k); positive iff every term decays.
    pub fn decay_rate(&self) -> f64 {
        self.terms.iter().map(|(p, _)| -p.im).fold(f64::INFINITY, f64::min)
    }

    /// ∫₀^∞ g(t) h(t) dt = Σ_{k,l} c_k d_l / (i (p_k + q_l)).
    /// Requires every pairwise sum of poles to decay (Im < 0).
    pub fn product_integral(&self, other: &CausalSum) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(p, c) in &self.terms {
            for &(q, d) in &other.terms {
                let s = p + q;
                if s.im >= 0.0 {
                    return Err(Error::numerical(
                        "CausalSum::product_integral",
                        "non-decaying kernel product",
                    ));
                }
                acc += c * d / (Complex64::new(0.0, 1.0) * s);
            }
        }
        Ok(acc)
    }
}

/// Anticausal signal `f(t) = Σ_k i a_k e^{-i n_k t} Θ(−t)` from upper-half
/// pole terms; `∫_{-∞}^0 f g dt = Σ_{k,l} (i a_k)(i b_l)·i/(n_k + m_l)`.
pub fn anticausal_product_integral(
    terms_a: &[PoleTerm],
    terms_b: &[PoleTerm],
) -> Result<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for a in terms_a {
        for b in terms_b {
            let s = a.pole + b.pole;
            if s.im <= 0.0 {
                return Err(Error::numerical(
                    "anticausal_product_integral",
                    "non-decaying anticausal product",
                ));
            }
            acc += (i * a.coeff) * (i * b.coeff) * i / s;
        }
    }
    Ok(acc)
}

/// Value of the anticausal part at t = 0⁻: `Σ_k i a_k`.
pub fn anticausal_value_at_zero(terms: &[PoleTerm]) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    terms.iter().map(|t| i * t.coeff).sum()
}
