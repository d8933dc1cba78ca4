//! The diagonal Jacobian blocks Λ_k and their certified inverses.

use crate::interval::{pi, Interval, IntervalMatrix};
use crate::linalg::RealMat;
use crate::sequence::MatrixFourierSeq;
use crate::{Error, Result};

/// Enclosure of Λ_k = ∂f_k/∂Q_k at the candidate:
///
/// ```text
/// Λ_k = [ λ11                  −k(π/τ) I + λ12 ]
///       [ k(π/τ) I + λ21        λ22            ]
/// ```
///
/// with `λ11 = I⊗R̄ᵀ − (ReA_0 + ReA_{2k})⊗I`, `λ22 = I⊗R̄ᵀ − (ReA_0 − ReA_{2k})⊗I`
/// and `λ12 = λ21 = −ImA_{2k}⊗I` in row-major vectorization.
pub fn lambda_k(
    k: usize,
    r_bar: &RealMat,
    a_seq: &MatrixFourierSeq,
    tau: &Interval,
) -> Result<IntervalMatrix> {
    assert!(k >= 1, "lambda blocks start at k = 1");
    let n = a_seq.n();
    let nsq = n * n;
    let (a0re, _) = a_seq.coeff_pair(0);
    let (a2k_re, a2k_im) = a_seq.coeff_pair(2 * k as i64);
    let r_iv = IntervalMatrix::from_fn(n, n, |i, j| Interval::point(r_bar[(i, j)]));

    let right_r = r_iv.kron_right(n);
    let l11 = right_r.try_sub(&a0re.try_add(&a2k_re)?.kron_left(n))?;
    let l22 = right_r.try_sub(&a0re.try_sub(&a2k_re)?.kron_left(n))?;
    let l12 = a2k_im.kron_left(n).neg();

    let kw = pi().div(tau)?.scale(k as f64);
    let mut out = IntervalMatrix::zeros(2 * nsq, 2 * nsq);
    for i in 0..nsq {
        for j in 0..nsq {
            out[(i, j)] = l11[(i, j)];
            out[(i, nsq + j)] = l12[(i, j)];
            out[(nsq + i, j)] = l12[(i, j)];
            out[(nsq + i, nsq + j)] = l22[(i, j)];
        }
        out[(i, nsq + i)] = out[(i, nsq + i)].add(&kw.neg());
        out[(nsq + i, i)] = out[(nsq + i, i)].add(&kw);
    }
    Ok(out)
}

/// A certified inverse enclosure together with a norm bound.
#[derive(Debug, Clone)]
pub struct CertifiedInverse {
    pub enclosure: IntervalMatrix,
    /// Upper bound of the row-sum norm of the true inverse.
    pub norm_upper: f64,
}

/// Certify an inverse of an interval matrix by a Neumann series defect
/// bound: with `B₀` a floating approximation of the midpoint inverse and
/// `d = ‖I − B₀·Λ‖_∞ < 1`, the true inverse of every matrix in the enclosure
/// lies within `B₀ ± d/(1−d)·‖B₀‖_∞` entrywise.
pub fn lambda_k_inverse(lambda: &IntervalMatrix) -> Result<CertifiedInverse> {
    let dim = lambda.rows();
    let mid = RealMat::from_vec(dim, dim, lambda.midpoint());
    let b0 = mid.inverse().map_err(|_| Error::NotCertifiablyInvertible(f64::INFINITY))?;
    let b0_iv = IntervalMatrix::from_fn(dim, dim, |i, j| Interval::point(b0[(i, j)]));
    let defect = IntervalMatrix::identity(dim).try_sub(&b0_iv.try_mul(lambda)?)?;
    let d = defect.rowsum_norm();
    if d >= 1.0 {
        return Err(Error::NotCertifiablyInvertible(d));
    }
    let b0_norm = b0_iv.rowsum_norm();
    let pad = crate::interval::up(d / (1.0 - d) * b0_norm);
    Ok(CertifiedInverse {
        enclosure: b0_iv.inflate(pad),
        norm_upper: crate::interval::up(b0_norm / (1.0 - d)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_seq(n: usize, tau: f64) -> MatrixFourierSeq {
        MatrixFourierSeq::zero(n, Interval::point(tau), 1)
    }

    #[test]
    fn pure_rotation_block() {
        // R̄ = 0 and A = 0: Λ_k = [[0, −kπ/τ I], [kπ/τ I, 0]].
        let n = 2;
        let tau = 0.7;
        let lam = lambda_k(3, &RealMat::zeros(n, n), &zero_seq(n, tau), &Interval::point(tau))
            .unwrap();
        let kw = 3.0 * std::f64::consts::PI / tau;
        let nsq = n * n;
        for i in 0..nsq {
            for j in 0..nsq {
                let expect_ur = if i == j { -kw } else { 0.0 };
                let expect_ll = if i == j { kw } else { 0.0 };
                assert!(lam[(i, nsq + j)].contains(expect_ur));
                assert!(lam[(nsq + i, j)].contains(expect_ll));
                assert!(lam[(i, j)].contains(0.0) && lam[(i, j)].width() < 1e-12);
            }
        }
        // Exact inverse norm is τ/(kπ).
        let inv = lambda_k_inverse(&lam).unwrap();
        let expect = tau / (3.0 * std::f64::consts::PI);
        assert!(inv.norm_upper >= expect && inv.norm_upper < expect * (1.0 + 1e-9));
        // Off-diagonal inverse entries are ±τ/(kπ).
        assert!(inv.enclosure[(0, nsq)].contains(expect));
        assert!(inv.enclosure[(nsq, 0)].contains(-expect));
    }

    #[test]
    fn diagonal_interval_matrix_inverse() {
        let m = IntervalMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                if i == 0 {
                    Interval::new(2.0, 2.1)
                } else {
                    Interval::new(4.0, 4.1)
                }
            } else {
                Interval::ZERO
            }
        });
        let inv = lambda_k_inverse(&m).unwrap();
        // Entrywise reciprocal enclosures.
        assert!(inv.enclosure[(0, 0)].contains(1.0 / 2.0) && inv.enclosure[(0, 0)].contains(1.0 / 2.1));
        assert!(inv.enclosure[(1, 1)].contains(1.0 / 4.0) && inv.enclosure[(1, 1)].contains(1.0 / 4.1));
    }

    #[test]
    fn product_with_original_encloses_identity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let dim = 6;
            let m = IntervalMatrix::from_fn(dim, dim, |i, j| {
                let base: f64 = if i == j {
                    5.0 + rng.random_range(0.0..2.0)
                } else {
                    rng.random_range(-0.4..0.4)
                };
                Interval::with_radius(base, 1e-9)
            });
            let inv = lambda_k_inverse(&m).unwrap();
            let prod = inv.enclosure.try_mul(&m).unwrap();
            for i in 0..dim {
                for j in 0..dim {
                    let target = if i == j { 1.0 } else { 0.0 };
                    assert!(prod[(i, j)].contains(target));
                }
            }
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = IntervalMatrix::from_fn(2, 2, |_, _| Interval::new(1.0, 1.0));
        assert!(matches!(
            lambda_k_inverse(&m),
            Err(Error::NotCertifiablyInvertible(_))
        ));
    }
}
