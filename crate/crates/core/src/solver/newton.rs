//! Newton refinement of the projected problem.

use super::{f_eval_point, jacobian_assemble, FloquetCandidate, GalerkinProblem};
use crate::{Error, Result};

/// Refine a candidate until `|f^(m)(x̄)|_∞ ≤ tol`.
pub fn newton_refine(
    x0: &FloquetCandidate,
    prob: &GalerkinProblem,
    tol: f64,
    max_iter: usize,
) -> Result<FloquetCandidate> {
    let mid = prob.midpoint();
    let mut x = x0.clone();
    let mut f = f_eval_point(&x, &mid);
    let mut fnorm = f.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    for _ in 0..max_iter {
        if fnorm <= tol {
            return Ok(x);
        }
        let jac = jacobian_assemble(&x, &mid);
        let lu = jac.lu().map_err(|_| Error::SingularJacobian)?;
        let step = lu.solve_vec(&f);
        let v = x.pack();
        let mut lambda = 1.0;
        let mut advanced = false;
        for _ in 0..8 {
            let vn: Vec<f64> = v.iter().zip(&step).map(|(a, s)| a - lambda * s).collect();
            let xn = FloquetCandidate::unpack(x.n, x.m, x.tau, &vn);
            let fn_ = f_eval_point(&xn, &mid);
            let fn_norm = fn_.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            if fn_norm < fnorm || fn_norm <= tol {
                x = xn;
                f = fn_;
                fnorm = fn_norm;
                advanced = true;
                break;
            }
            lambda *= 0.5;
        }
        if !advanced {
            return Err(Error::NoConvergence(format!(
                "Newton stalled at residual {fnorm:.3e}"
            )));
        }
    }
    if fnorm <= tol {
        Ok(x)
    } else {
        Err(Error::NoConvergence(format!(
            "residual {fnorm:.3e} > {tol:.1e} after {max_iter} iterations"
        )))
    }
}

/// Convenience: residual norm of a candidate.
pub fn residual_norm(x: &FloquetCandidate, prob: &GalerkinProblem) -> f64 {
    let f = f_eval_point(x, &prob.midpoint());
    f.iter().fold(0.0f64, |a, b| a.max(b.abs()))
}
