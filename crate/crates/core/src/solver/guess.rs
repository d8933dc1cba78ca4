//! Initial candidate construction by integration and matrix logarithm.

use super::FloquetCandidate;
use crate::linalg::{matrix_log_real, RealMat};
use crate::ode;
use crate::system::OrbitEnclosure;
use crate::Result;

/// Build a starting candidate from a validated orbit:
/// 1. integrate `Φ̇ = A(t)Φ`, `Φ(0) = I` over one doubled period,
/// 2. take the real part of the principal matrix logarithm for `R`,
/// 3. integrate `Q̇ = A(t)Q − QR` and project the samples onto the first
///    `m` Fourier modes.
///
/// Everything uses midpoint data: the output only needs to be good enough to
/// put Newton into its basin.
pub fn init_guess(orbit: &OrbitEnclosure, m: usize) -> Result<FloquetCandidate> {
    let n = orbit.field.n;
    let quad = orbit.field.quadratic_form()?;
    let (j0, ji) = quad.jacobian_parts();
    let tau = orbit.tau.mid();

    // A(t) at midpoint data.
    let a_at = |t: f64| -> RealMat {
        let y = orbit.gamma_mid_at(t);
        let mut a = j0.clone();
        for (i, jmat) in ji.iter().enumerate() {
            if y[i] != 0.0 {
                a = a.add(&jmat.scale(y[i]));
            }
        }
        a
    };

    // Fundamental solution over [0, 2τ].
    let nsq = n * n;
    let mut rhs_phi = |t: f64, y: &[f64], dy: &mut [f64]| {
        let a = a_at(t);
        // dΦ = A Φ with Φ row major.
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for c in 0..n {
                    acc += a[(i, c)] * y[c * n + j];
                }
                dy[i * n + j] = acc;
            }
        }
    };
    let phi0: Vec<f64> = RealMat::identity(n).data().to_vec();
    let phi_end = ode::integrate(&mut rhs_phi, 0.0, 2.0 * tau, &phi0, 1e-12)?;
    let monodromy2 = RealMat::from_vec(n, n, phi_end);

    // R = Re log(Φ(2τ)) / (2τ); the principal branch must exist.
    let r_mat = matrix_log_real(&monodromy2)?.scale(1.0 / (2.0 * tau));

    // Q̇ = A Q − Q R, sampled uniformly over [0, 2τ].
    let samples = (4 * m).next_power_of_two().max(256);
    let mut rhs_q = |t: f64, y: &[f64], dy: &mut [f64]| {
        let a = a_at(t);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for c in 0..n {
                    acc += a[(i, c)] * y[c * n + j] - y[i * n + c] * r_mat[(c, j)];
                }
                dy[i * n + j] = acc;
            }
        }
    };
    let path = ode::integrate_sampled(&mut rhs_q, 0.0, 2.0 * tau, &phi0, samples + 1, 1e-12)?;

    // Discrete Fourier projection onto modes 0..m-1 (basis e^{ikπt/τ}).
    let mut q = Vec::with_capacity(m);
    for k in 0..m {
        let mut re = RealMat::zeros(n, n);
        let mut im = RealMat::zeros(n, n);
        for (j, qj) in path.iter().take(samples).enumerate() {
            let ang = -2.0 * std::f64::consts::PI * (k * j) as f64 / samples as f64;
            let (c, s) = (ang.cos(), ang.sin());
            for p in 0..nsq {
                re.data_mut()[p] += qj[p] * c;
                im.data_mut()[p] += qj[p] * s;
            }
        }
        let scale = 1.0 / samples as f64;
        re = re.scale(scale);
        im = im.scale(scale);
        if k == 0 {
            im = RealMat::zeros(n, n);
        }
        q.push((re, im));
    }

    Ok(FloquetCandidate { n, m, tau, r_mat, q })
}
