//! Non-rigorous periodic orbit candidate search.
//!
//! Newton iteration on the Fourier-Galerkin form of the periodic boundary
//! value problem: unknowns are the period and the coefficients ξ_k, equations
//! are `i k (2π/τ) ξ_k − ĝ(ξ)_k = 0` for `k = 0..M` plus an integral phase
//! condition anchored at the initial guess. Output is flagged non-rigorous;
//! the trust radius is supplied by the caller.

use super::{OrbitEnclosure, QuadraticField, VectorFieldSpec};
use crate::interval::{ComplexInterval, Interval};
use crate::linalg::RealMat;
use crate::ode;
use crate::{Error, Result};

/// Starting data for the candidate search.
#[derive(Debug, Clone)]
pub enum OrbitGuess {
    /// A state near the orbit and an approximate period; one loop is
    /// integrated and projected onto the Fourier basis.
    Point { y0: Vec<f64>, period: f64 },
    /// Approximate period and coefficients (re, im) for k = 0..=K; resized
    /// to the requested mode count.
    Coefficients { tau: f64, xi: Vec<Vec<(f64, f64)>> },
}

struct Packing {
    n: usize,
    m: usize,
}

impl Packing {
    fn dim(&self) -> usize {
        1 + self.n + 2 * self.n * self.m
    }

    fn tau(&self, u: &[f64]) -> f64 {
        u[0]
    }

    /// Complex coefficient (re, im) of mode k, component i.
    fn xi(&self, u: &[f64], k: usize, i: usize) -> (f64, f64) {
        if k == 0 {
            (u[1 + i], 0.0)
        } else {
            let base = 1 + self.n + (k - 1) * 2 * self.n;
            (u[base + 2 * i], u[base + 2 * i + 1])
        }
    }
}

/// Scalar mode sequence with conjugate symmetry, index k ∈ ℤ.
fn mode(u: &[f64], p: &Packing, k: i64, i: usize) -> (f64, f64) {
    let idx = k.unsigned_abs() as usize;
    if idx > p.m {
        return (0.0, 0.0);
    }
    let (re, im) = p.xi(u, idx, i);
    if k >= 0 {
        (re, im)
    } else {
        (re, -im)
    }
}

/// Residual of the Galerkin system; length = packing dim.
fn residual(u: &[f64], p: &Packing, quad: &QuadraticField, phase_ref: &[f64]) -> Vec<f64> {
    let (n, m) = (p.n, p.m);
    let tau = p.tau(u);
    let omega = 2.0 * std::f64::consts::PI / tau;
    let mut out = vec![0.0; p.dim()];

    // ĝ(ξ)_k for k = 0..=m
    let mut ghat = vec![vec![(0.0, 0.0); n]; m + 1];
    for (k, row) in ghat.iter_mut().enumerate() {
        for (i, slot) in row.iter_mut().enumerate() {
            let mut re = if k == 0 { quad.constant[i] } else { 0.0 };
            let mut im = 0.0;
            for j in 0..n {
                let b = quad.linear[(i, j)];
                if b != 0.0 {
                    let (xr, xi_) = p.xi(u, k, j);
                    re += b * xr;
                    im += b * xi_;
                }
            }
            *slot = (re, im);
        }
    }
    for &(i, j, l, q) in &quad.quad {
        for (k, row) in ghat.iter_mut().enumerate() {
            let mut cre = 0.0;
            let mut cim = 0.0;
            for k1 in -(m as i64)..=(m as i64) {
                let k2 = k as i64 - k1;
                if k2.unsigned_abs() as usize > m {
                    continue;
                }
                let (ar, ai) = mode(u, p, k1, j);
                let (br, bi) = mode(u, p, k2, l);
                cre += ar * br - ai * bi;
                cim += ar * bi + ai * br;
            }
            row[i].0 += q * cre;
            row[i].1 += q * cim;
        }
    }

    // Mode 0: ĝ_0 = 0 (real part; imaginary vanishes by symmetry).
    for i in 0..n {
        out[i] = -ghat[0][i].0;
    }
    // Modes k >= 1: i k ω ξ_k − ĝ_k = 0.
    for k in 1..=m {
        for i in 0..n {
            let (xr, xi_) = p.xi(u, k, i);
            let kw = k as f64 * omega;
            let fre = -kw * xi_ - ghat[k][i].0;
            let fim = kw * xr - ghat[k][i].1;
            let base = n + (k - 1) * 2 * n;
            out[base + 2 * i] = fre;
            out[base + 2 * i + 1] = fim;
        }
    }
    // Phase: <u - u_ref, d(u_ref)/dθ> = 0 over the coefficient slots.
    let mut phase = 0.0;
    let omega_ref = 2.0 * std::f64::consts::PI / phase_ref[0];
    for k in 1..=m {
        for i in 0..n {
            let pr = Packing { n, m };
            let (rr, ri) = pr.xi(phase_ref, k, i);
            let (xr, xi_) = p.xi(u, k, i);
            let kw = k as f64 * omega_ref;
            // d/dθ of mode k at the reference: i k ω ξ = (-kω Im, kω Re)
            phase += -kw * ri * (xr - rr) + kw * rr * (xi_ - ri);
        }
    }
    out[p.dim() - 1] = phase;
    out
}

fn guess_to_vector(
    field: &VectorFieldSpec,
    guess: &OrbitGuess,
    m: usize,
) -> Result<Vec<f64>> {
    let n = field.n;
    let p = Packing { n, m };
    let mut u = vec![0.0; p.dim()];
    match guess {
        OrbitGuess::Coefficients { tau, xi } => {
            u[0] = *tau;
            for (k, row) in xi.iter().enumerate().take(m + 1) {
                for (i, &(re, im)) in row.iter().enumerate() {
                    if k == 0 {
                        u[1 + i] = re;
                    } else {
                        let base = 1 + n + (k - 1) * 2 * n;
                        u[base + 2 * i] = re;
                        u[base + 2 * i + 1] = im;
                    }
                }
            }
        }
        OrbitGuess::Point { y0, period } => {
            if y0.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "guess state has {} components, field has {n}",
                    y0.len()
                )));
            }
            let quad = field.quadratic_form()?;
            let samples = (4 * m + 4).next_power_of_two().max(128);
            let mut g = vec![0.0; n];
            let mut f = |_t: f64, y: &[f64], dy: &mut [f64]| {
                quad.eval(y, &mut g);
                dy.copy_from_slice(&g);
            };
            let path = ode::integrate_sampled(&mut f, 0.0, *period, y0, samples + 1, 1e-12)?;
            // Discrete Fourier projection over one period (drop the endpoint).
            u[0] = *period;
            for k in 0..=m {
                for i in 0..n {
                    let mut re = 0.0;
                    let mut im = 0.0;
                    for (j, yj) in path.iter().take(samples).enumerate() {
                        let ang = -2.0 * std::f64::consts::PI * (k * j) as f64 / samples as f64;
                        re += yj[i] * ang.cos();
                        im += yj[i] * ang.sin();
                    }
                    re /= samples as f64;
                    im /= samples as f64;
                    if k == 0 {
                        u[1 + i] = re;
                    } else {
                        let base = 1 + n + (k - 1) * 2 * n;
                        u[base + 2 * i] = re;
                        u[base + 2 * i + 1] = im;
                    }
                }
            }
        }
    }
    Ok(u)
}

/// Newton search for a periodic orbit candidate in Fourier coefficient space.
///
/// `r_gamma` is a trust radius chosen by the caller; the returned enclosure
/// carries `rigorous = false` so downstream reports stay conditional on the
/// orbit hypothesis.
pub fn orbit_candidate_find(
    field: &VectorFieldSpec,
    guess: &OrbitGuess,
    m_gamma: usize,
    r_gamma: f64,
) -> Result<OrbitEnclosure> {
    let n = field.n;
    let quad = field.quadratic_form()?;
    let p = Packing { n, m: m_gamma };
    let mut u = guess_to_vector(field, guess, m_gamma)?;
    if u[0] <= 0.0 {
        return Err(Error::DomainError("guess period must be positive".into()));
    }
    let phase_ref = u.clone();
    let dim = p.dim();

    let max_iter = 80;
    let tol = 1e-11;
    let mut fu = residual(&u, &p, &quad, &phase_ref);
    let mut fnorm = fu.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    for _ in 0..max_iter {
        if fnorm <= tol {
            break;
        }
        // Central finite difference Jacobian.
        let mut jac = RealMat::zeros(dim, dim);
        let mut up_ = u.clone();
        for c in 0..dim {
            let h = 1e-6 * u[c].abs().max(1e-3);
            up_[c] = u[c] + h;
            let fp = residual(&up_, &p, &quad, &phase_ref);
            up_[c] = u[c] - h;
            let fm_ = residual(&up_, &p, &quad, &phase_ref);
            up_[c] = u[c];
            for r in 0..dim {
                jac[(r, c)] = (fp[r] - fm_[r]) / (2.0 * h);
            }
        }
        let lu = jac.lu()?;
        let step = lu.solve_vec(&fu);
        // Damped update.
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..10 {
            let candidate: Vec<f64> =
                u.iter().zip(&step).map(|(x, s)| x - lambda * s).collect();
            if candidate[0] > 0.0 {
                let fc = residual(&candidate, &p, &quad, &phase_ref);
                let fcn = fc.iter().fold(0.0f64, |a, b| a.max(b.abs()));
                if fcn < fnorm || fcn <= tol {
                    u = candidate;
                    fu = fc;
                    fnorm = fcn;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence(format!(
                "orbit Newton stalled at residual {fnorm:.3e}"
            )));
        }
    }
    if fnorm > tol {
        return Err(Error::NoConvergence(format!(
            "orbit Newton residual {fnorm:.3e} > {tol:.1e} after {max_iter} iterations"
        )));
    }

    let mut xi = Vec::with_capacity(m_gamma + 1);
    for k in 0..=m_gamma {
        let row: Vec<ComplexInterval> = (0..n)
            .map(|i| {
                let (re, im) = p.xi(&u, k, i);
                if k == 0 {
                    ComplexInterval::new(Interval::point(re), Interval::ZERO)
                } else {
                    ComplexInterval::point(re, im)
                }
            })
            .collect();
        xi.push(row);
    }
    let orbit = OrbitEnclosure {
        field: field.clone(),
        tau: Interval::point(u[0]),
        s_star: 2.0,
        m_gamma,
        xi,
        r_gamma,
        rigorous: false,
    };
    orbit.validate()?;
    Ok(orbit)
}
