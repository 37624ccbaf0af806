//! Adaptive Dormand–Prince 5(4) integrator for small ODE systems.

use crate::{Error, Result};

/// Integrate `dy/dt = f(t, y)` from `t0` to `t1` with adaptive step control.
///
/// `rtol`/`atol` bound the per-step local error estimate. Returns the state
/// at `t1`.
pub fn integrate<F>(
    f: F,
    t0: f64,
    t1: f64,
    y0: &[f64],
    rtol: f64,
    atol: f64,
) -> Result<Vec<f64>>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    let mut observer = |_t: f64, _y: &[f64]| {};
    integrate_observed(f, t0, t1, y0, rtol, atol, &mut observer)
}

/// As [`integrate`], invoking `observer` after every accepted step.
pub fn integrate_observed<F, O>(
    f: F,
    t0: f64,
    t1: f64,
    y0: &[f64],
    rtol: f64,
    atol: f64,
    observer: &mut O,
) -> Result<Vec<f64>>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
    O: FnMut(f64, &[f64]),
{
    // Dormand-Prince coefficients (RK45, FSAL).
    const A: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const E: [f64; 7] = [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];

    if t1 <= t0 {
        return Err(Error::domain("ode::integrate", "t1 must exceed t0"));
    }
    let dim = y0.len();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k = vec![vec![0.0; dim]; 7];
    k[0] = f(t, &y);
    let mut h = (t1 - t0) * 1e-4;
    let mut steps = 0usize;
    const MAX_STEPS: usize = 50_000_000;

    while t < t1 {
        if steps > MAX_STEPS {
            return Err(Error::numerical("ode::integrate", "step limit exceeded"));
        }
        steps += 1;
        h = h.min(t1 - t);
        // Build the six intermediate stages.
        let mut ytmp = vec![0.0; dim];
        for stage in 0..6 {
            for i in 0..dim {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(stage + 1) {
                    acc += A[stage][j] * kj[i];
                }
                ytmp[i] = y[i] + h * acc;
            }
            k[stage + 1] = f(t + C[stage] * h, &ytmp);
        }
        // 5th-order solution is the stage-6 state (FSAL); error from E.
        let ynew = ytmp.clone();
        let mut err: f64 = 0.0;
        for i in 0..dim {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += E[j] * kj[i];
            }
            let sc = atol + rtol * y[i].abs().max(ynew[i].abs());
            err = err.max((h * e / sc).abs());
        }
        if err <= 1.0 {
            t += h;
            y = ynew;
            k[0] = k[6].clone();
            observer(t, &y);
        } else {
            k[0] = f(t, &y);
        }
        let factor = if err > 0.0 { 0.9 * err.powf(-0.2) } else { 5.0 };
        h *= factor.clamp(0.2, 5.0);
        if h < 1e-14 * (t1 - t0) {
            return Err(Error::numerical("ode::integrate", "step size underflow"));
        }
    }
    Ok(y)
}
