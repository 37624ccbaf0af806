//! Simulation and estimation toolkit for linear quantum optomechanical systems.
//!
//! The crate computes quantum-noise spectra of cavity-based position meters,
//! conditional Gaussian states under continuous measurement (Riccati moment
//! evolution, causal Wiener filtering, Monte-Carlo trajectories), optimal
//! feedback controllers, tomography and teleportation error budgets, and
//! macroscopic-quantum-mechanics test observables.
//!
//! Conventions used throughout:
//!
//! * SI units with explicit `ħ`; the [`protocols`] module alone works in
//!   normalized units (`ħ = M = 1`) with SI conversion at its boundary.
//! * Single-sided spectral densities, `Var[x] = ∫₀^∞ S_xx(Ω) dΩ/2π`.
//!   Vacuum quadrature fields have `S = 1`.
//! * Fourier convention `x(t) = ∫ x̃(Ω) e^{-iΩt} dΩ/2π`; causal (stable)
//!   poles therefore sit in the lower half of the complex Ω plane.

pub mod conditional;
pub mod consts;
pub mod control;
pub mod error;
pub mod mqm;
pub mod ode;
pub mod params;
pub mod protocols;
pub mod quadrature;
pub mod rng;
pub mod spectra;
pub mod thermal;
pub mod trajectory;
pub mod verification;

pub use error::Error;
pub type Result<T> = std::result::Result<T, Error>;
