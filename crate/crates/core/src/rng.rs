//! Counter-based Gaussian random source for Wiener increments.
//!
//! Every draw is keyed by `(seed, trajectory, step, channel)`, so ensembles
//! are reproducible and independent of evaluation order or thread schedule.

/// SplitMix64 finalizer; full-avalanche 64-bit mixer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[inline]
fn key(seed: u64, trajectory: u64, step: u64, channel: u64) -> u64 {
    // Chain the coordinates through the mixer; each stage avalanches fully.
    let mut h = mix64(seed ^ 0x6a09_e667_f3bc_c909);
    h = mix64(h ^ trajectory);
    h = mix64(h ^ step.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    mix64(h ^ channel.wrapping_mul(0xc2b2_ae3d_27d4_eb4f))
}

#[inline]
fn to_open_unit(bits: u64) -> f64 {
    // (0, 1): use the top 53 bits, offset by half an ulp.
    ((bits >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
}

/// Standard normal deviate for the given counter coordinates (Box–Muller).
pub fn standard_normal(seed: u64, trajectory: u64, step: u64, channel: u64) -> f64 {
    let u1 = to_open_unit(key(seed, trajectory, step, 2 * channel));
    let u2 = to_open_unit(key(seed, trajectory, step, 2 * channel + 1));
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Deterministic source of Wiener increments over a fixed time step.
#[derive(Debug, Clone, Copy)]
pub struct WienerSource {
    pub seed: u64,
    /// Integration step, s.
    pub dt: f64,
}

impl WienerSource {
    pub fn new(seed: u64, dt: f64) -> Self {
        Self { seed, dt }
    }

    /// Wiener increment ΔW ~ N(0, dt) for (trajectory, step, channel).
    pub fn increment(&self, trajectory: u64, step: u64, channel: u64) -> f64 {
        self.dt.sqrt() * standard_normal(self.seed, trajectory, step, channel)
    }
}
