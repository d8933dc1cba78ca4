//! Adaptive explicit Runge-Kutta integration (Dormand–Prince 5(4)).
//!
//! Non-rigorous: used to seed Newton iterations and for diagnostic cross
//! checks. Tolerances default to 1e-12.

use crate::{Error, Result};

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const B5: [f64; 7] =
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate `y' = f(t, y)` from `t0` to `t1` (forward only).
pub fn integrate(
    f: &mut impl FnMut(f64, &[f64], &mut [f64]),
    t0: f64,
    t1: f64,
    y0: &[f64],
    tol: f64,
) -> Result<Vec<f64>> {
    let dim = y0.len();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut h = ((t1 - t0) / 100.0).max(1e-10);
    let mut k = vec![vec![0.0; dim]; 7];
    let mut ytmp = vec![0.0; dim];
    let mut steps = 0usize;

    f(t, &y, &mut k[0]);
    while t < t1 {
        steps += 1;
        if steps > 50_000_000 {
            return Err(Error::NoConvergence("step limit exceeded in integrator".into()));
        }
        if t + h > t1 {
            h = t1 - t;
        }
        for s in 0..6 {
            for i in 0..dim {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s + 1) {
                    acc += A[s][j] * kj[i];
                }
                ytmp[i] = y[i] + h * acc;
            }
            let ts = t + C[s] * h;
            let (head, tail) = k.split_at_mut(s + 1);
            let _ = head;
            f(ts, &ytmp, &mut tail[0]);
        }
        // 5th and 4th order results, error estimate.
        let mut err: f64 = 0.0;
        for i in 0..dim {
            let mut y5 = 0.0;
            let mut y4 = 0.0;
            for s in 0..7 {
                y5 += B5[s] * k[s][i];
                y4 += B4[s] * k[s][i];
            }
            ytmp[i] = y[i] + h * y5;
            let sc = tol * (1.0 + y[i].abs().max(ytmp[i].abs()));
            err = err.max((h * (y5 - y4)).abs() / sc);
        }
        if err <= 1.0 {
            t += h;
            y.copy_from_slice(&ytmp);
            // FSAL property of the tableau.
            let last = k[6].clone();
            k[0].copy_from_slice(&last);
        }
        let fac = if err > 0.0 { 0.9 * err.powf(-0.2) } else { 5.0 };
        h *= fac.clamp(0.2, 5.0);
        h = h.max(1e-14 * (t1 - t0));
    }
    Ok(y)
}

/// Integrate and record the solution at `samples` knots, t0 inclusive.
pub fn integrate_sampled(
    f: &mut impl FnMut(f64, &[f64], &mut [f64]),
    t0: f64,
    t1: f64,
    y0: &[f64],
    samples: usize,
    tol: f64,
) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::with_capacity(samples);
    let mut y = y0.to_vec();
    out.push(y.clone());
    for i in 1..samples {
        let ta = t0 + (t1 - t0) * (i - 1) as f64 / (samples - 1) as f64;
        let tb = t0 + (t1 - t0) * i as f64 / (samples - 1) as f64;
        y = integrate(f, ta, tb, &y, tol)?;
        out.push(y.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let mut f = |_t: f64, y: &[f64], dy: &mut [f64]| dy[0] = -y[0];
        let y = integrate(&mut f, 0.0, 3.0, &[1.0], 1e-12).unwrap();
        assert!((y[0] - (-3.0f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn harmonic_oscillator_energy() {
        let mut f = |_t: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1];
            dy[1] = -y[0];
        };
        let y = integrate(&mut f, 0.0, 2.0 * std::f64::consts::PI, &[1.0, 0.0], 1e-12).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-9, "y0 = {}", y[0]);
        assert!(y[1].abs() < 1e-9);
    }

    #[test]
    fn time_dependent_rhs() {
        // y' = cos(t) => y = sin(t)
        let mut f = |t: f64, _y: &[f64], dy: &mut [f64]| dy[0] = t.cos();
        let y = integrate(&mut f, 0.0, 1.7, &[0.0], 1e-12).unwrap();
        assert!((y[0] - 1.7f64.sin()).abs() < 1e-11);
    }
}
