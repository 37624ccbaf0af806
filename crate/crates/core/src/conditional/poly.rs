//! Dense complex polynomials with root finding (Durand–Kerner plus Newton
//! polishing). Degrees stay small here (≤ 8), so robustness beats asymptotic
//! cleverness.

use num_complex::Complex64;

use crate::{Error, Result};

/// Polynomial in ascending-power coefficient order.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    pub c: Vec<Complex64>,
}

impl Poly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = Self { c: coeffs };
        p.trim();
        p
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn constant(v: Complex64) -> Self {
        Self::new(vec![v])
    }

    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut p = Self::constant(Complex64::new(1.0, 0.0));
        for &r in roots {
            p = p.mul(&Self::new(vec![-r, Complex64::new(1.0, 0.0)]));
        }
        p
    }

    fn trim(&mut self) {
        while self.c.len() > 1 && self.c.last().map_or(false, |v| v.norm() == 0.0) {
            self.c.pop();
        }
        if self.c.is_empty() {
            self.c.push(Complex64::new(0.0, 0.0));
        }
    }

    pub fn degree(&self) -> usize {
        self.c.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        *self.c.last().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|v| v.norm() == 0.0)
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &coef in self.c.iter().rev() {
            acc = acc * x + coef;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.c.len() <= 1 {
            return Poly::constant(Complex64::new(0.0, 0.0));
        }
        Poly::new(
            self.c[1..]
                .iter()
                .enumerate()
                .map(|(i, &coef)| coef * (i as f64 + 1.0))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![Complex64::new(0.0, 0.0); self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in other.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.c.len().max(other.c.len());
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, &a) in self.c.iter().enumerate() {
            out[i] += a;
        }
        for (i, &b) in other.c.iter().enumerate() {
            out[i] += b;
        }
        Poly::new(out)
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly::new(self.c.iter().map(|&v| v * s).collect())
    }

    /// Polynomial with conjugated coefficients: `pconj(Ω) = conj(p(conj Ω))`.
    /// On the real axis this is the complex conjugate of `p`.
    pub fn conj_coeffs(&self) -> Poly {
        Poly::new(self.c.iter().map(|v| v.conj()).collect())
    }

    pub fn monic(&self) -> Poly {
        self.scale(Complex64::new(1.0, 0.0) / self.leading())
    }

    /// Deflate a known root by synthetic division; the remainder is dropped.
    pub fn deflate(&self, root: Complex64) -> Poly {
        let n = self.c.len();
        if n <= 1 {
            return Poly::constant(Complex64::new(0.0, 0.0));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); n - 1];
        let mut carry = self.c[n - 1];
        for i in (0..n - 1).rev() {
            out[i] = carry;
            carry = self.c[i] + carry * root;
        }
        Poly::new(out)
    }

    /// All complex roots. Exact zeros at the origin are split off first;
    /// remaining roots come from Durand–Kerner iteration with Newton polish.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        if self.is_zero() {
            return Err(Error::domain("Poly::roots", "zero polynomial"));
        }
        let mut work = self.monic();
        let mut roots = Vec::with_capacity(self.degree());
        // Factor out exact zeros at the origin.
        let scale = work.c.iter().map(|v| v.norm()).fold(0.0f64, f64::max).max(1.0);
        while work.degree() > 0 && work.c[0].norm() < 1e-300 * scale {
            roots.push(Complex64::new(0.0, 0.0));
            work = Poly::new(work.c[1..].to_vec());
        }
        let n = work.degree();
        if n == 0 {
            return Ok(roots);
        }
        if n == 1 {
            roots.push(-work.c[0] / work.c[1]);
            return Ok(roots);
        }
        if n == 2 {
            let (a, b, c) = (work.c[2], work.c[1], work.c[0]);
            let disc = (b * b - 4.0 * a * c).sqrt();
            // Numerically stable pairing.
            let q = if (b + disc).norm() > (b - disc).norm() {
                -(b + disc) / 2.0
            } else {
                -(b - disc) / 2.0
            };
            roots.push(q / a);
            roots.push(c / q);
            return Ok(roots);
        }
        // Durand-Kerner from staggered points on a Cauchy-bound circle.
        let radius = 1.0
            + work.c[..n].iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        let mut xs: Vec<Complex64> = (0..n)
            .map(|k| {
                let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
                radius * Complex64::new(angle.cos(), angle.sin())
            })
            .collect();
        let mut converged = false;
        for _ in 0..600 {
            let mut max_step = 0.0f64;
            for k in 0..n {
                let mut denom = Complex64::new(1.0, 0.0);
                for j in 0..n {
                    if j != k {
                        denom *= xs[k] - xs[j];
                    }
                }
                if denom.norm() == 0.0 {
                    denom = Complex64::new(1e-300, 0.0);
                }
                let step = work.eval(xs[k]) / denom;
                xs[k] -= step;
                max_step = max_step.max(step.norm());
            }
            if max_step < 1e-14 * radius {
                converged = true;
                break;
            }
        }
        // Newton polish against the original polynomial.
        let deriv = work.derivative();
        for x in xs.iter_mut() {
            for _ in 0..30 {
                let d = deriv.eval(*x);
                if d.norm() == 0.0 {
                    break;
                }
                let step = work.eval(*x) / d;
                *x -= step;
                if step.norm() < 1e-15 * (x.norm() + 1.0) {
                    break;
                }
            }
        }
        if !converged {
            // Accept if the polished roots reproduce the polynomial.
            let resid: f64 = xs.iter().map(|&x| work.eval(x).norm()).fold(0.0, f64::max);
            if resid > 1e-6 * scale {
                return Err(Error::numerical("Poly::roots", "root iteration failed to converge"));
            }
        }
        roots.extend(xs);
        Ok(roots)
    }
}
