//! Evaluation of the map components and assembly of the projected Jacobian.

use super::{FloquetCandidate, GalerkinProblem, ProblemMid};
use crate::interval::{pi, Interval, IntervalMatrix};
use crate::linalg::RealMat;
use crate::sequence::MatrixFourierSeq;
use crate::verifier::zeta_upper;
use crate::Result;

/// Interval enclosures of the components `f_⋆, f_0, f_1, …, f_{k_max}`.
#[derive(Debug, Clone)]
pub struct FComponents {
    pub star: IntervalMatrix,
    pub zero: IntervalMatrix,
    /// (f_{k,1}, f_{k,2}) for k = 1..=k_max.
    pub modes: Vec<(IntervalMatrix, IntervalMatrix)>,
}

impl FComponents {
    /// Upper bound of |f_k|_∞ over all computed components.
    pub fn sup_abs(&self) -> f64 {
        let mut best = self.star.abs_sup().max(self.zero.abs_sup());
        for (a, b) in &self.modes {
            best = best.max(a.abs_sup()).max(b.abs_sup());
        }
        best
    }

    /// Stack blocks 0..m-1 as a packed interval column vector.
    pub fn pack(&self, m: usize) -> IntervalMatrix {
        let n = self.star.rows();
        let nsq = n * n;
        let mut out = IntervalMatrix::zeros(2 * nsq * m, 1);
        for i in 0..n {
            for j in 0..n {
                out[(i * n + j, 0)] = self.star[(i, j)];
                out[(nsq + i * n + j, 0)] = self.zero[(i, j)];
            }
        }
        for k in 1..m {
            let (f1, f2) = &self.modes[k - 1];
            let off = 2 * nsq * k;
            for i in 0..n {
                for j in 0..n {
                    out[(off + i * n + j, 0)] = f1[(i, j)];
                    out[(off + nsq + i * n + j, 0)] = f2[(i, j)];
                }
            }
        }
        out
    }
}

/// Rigorous evaluation of the map components at a coefficient sequence with
/// a constant matrix enclosure `r_mat`. Convolutions include the tails of
/// both sequences.
pub fn f_eval(
    q_seq: &MatrixFourierSeq,
    r_mat: &IntervalMatrix,
    prob: &GalerkinProblem,
    k_max: usize,
) -> Result<FComponents> {
    let n = prob.n();
    let tau = &prob.tau;
    let omega = pi().div(tau)?;
    let cutoff = q_seq.stored_len().max(prob.m) - 1;

    // f_⋆ = Q_0 + 2 Σ Q_{k,1} − I  (+ tail)
    let mut star = q_seq.stored(0).re.clone();
    for k in 1..q_seq.stored_len() {
        star = star.try_add(&q_seq.stored(k).re.scale(2.0))?;
    }
    if q_seq.tail_c() > 0.0 {
        let z = zeta_upper(q_seq.stored_len() - 1, q_seq.tail_s())?;
        star = star.inflate(crate::interval::up(2.0 * q_seq.tail_c() * z));
    }
    star = star.try_sub(&IntervalMatrix::identity(n))?;

    // f_0 = Q_0 R − (A·Q)_0 (real part; imaginary part vanishes by symmetry)
    let (conv0_re, _conv0_im) = MatrixFourierSeq::convolve(&prob.a_seq, q_seq, 0, cutoff)?;
    let zero = q_seq.stored(0).re.try_mul(r_mat)?.try_sub(&conv0_re)?;

    let mut modes = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let (qk_re, qk_im) = q_seq.coeff_pair(k as i64);
        let (ck_re, ck_im) = MatrixFourierSeq::convolve(&prob.a_seq, q_seq, k as i64, cutoff)?;
        let kw = omega.scale(k as f64);
        let f1 = qk_im
            .scale_iv(&kw)
            .neg()
            .try_add(&qk_re.try_mul(r_mat)?)?
            .try_sub(&ck_re)?;
        let f2 = qk_re
            .scale_iv(&kw)
            .try_add(&qk_im.try_mul(r_mat)?)?
            .try_sub(&ck_im)?;
        modes.push((f1, f2));
    }
    Ok(FComponents { star, zero, modes })
}

/// Floating point residual of the projected map at a candidate, packed.
pub fn f_eval_point(x: &FloquetCandidate, mid: &ProblemMid) -> Vec<f64> {
    let n = x.n;
    let nsq = n * n;
    let m = x.m;
    let omega = std::f64::consts::PI / x.tau;
    let mut out = vec![0.0; 2 * nsq * m];

    // Convolutions (A·Q)_k for k = 0..m-1 using midpoint data.
    let max_a = mid.coeffs.len() as i64 - 1;
    let conv = |k: i64| -> (RealMat, RealMat) {
        let mut re = RealMat::zeros(n, n);
        let mut im = RealMat::zeros(n, n);
        for k2 in -(m as i64 - 1)..=(m as i64 - 1) {
            let k1 = k - k2;
            if k1.abs() > max_a {
                continue;
            }
            let Some((ar, ai)) = mid.coeff(k1) else { continue };
            let idx2 = k2.unsigned_abs() as usize;
            let (qr, qi_base) = (&x.q[idx2].0, &x.q[idx2].1);
            let qi = if k2 >= 0 { qi_base.clone() } else { qi_base.scale(-1.0) };
            re = re.add(&ar.mul(qr)).sub(&ai.mul(&qi));
            im = im.add(&ar.mul(&qi)).add(&ai.mul(qr));
        }
        (re, im)
    };

    // f_⋆
    let mut star = x.q[0].0.clone();
    for k in 1..m {
        star = star.add(&x.q[k].0.scale(2.0));
    }
    star = star.sub(&RealMat::identity(n));
    out[..nsq].copy_from_slice(star.data());

    // f_0
    let (c0re, _) = conv(0);
    let f0 = x.q[0].0.mul(&x.r_mat).sub(&c0re);
    out[nsq..2 * nsq].copy_from_slice(f0.data());

    for k in 1..m {
        let (ckre, ckim) = conv(k as i64);
        let kw = k as f64 * omega;
        let f1 = x.q[k].1.scale(-kw).add(&x.q[k].0.mul(&x.r_mat)).sub(&ckre);
        let f2 = x.q[k].0.scale(kw).add(&x.q[k].1.mul(&x.r_mat)).sub(&ckim);
        let off = 2 * nsq * k;
        out[off..off + nsq].copy_from_slice(f1.data());
        out[off + nsq..off + 2 * nsq].copy_from_slice(f2.data());
    }
    out
}

/// Analytic Jacobian of the projected map at the candidate (floating point).
pub fn jacobian_assemble(x: &FloquetCandidate, mid: &ProblemMid) -> RealMat {
    let n = x.n;
    let nsq = n * n;
    let m = x.m;
    let dim = 2 * nsq * m;
    let omega = std::f64::consts::PI / x.tau;
    let mut jac = RealMat::zeros(dim, dim);

    // Helpers: left multiplication block L(C) = C ⊗ I, right block I ⊗ Rᵀ.
    let put_left = |jac: &mut RealMat, row0: usize, col0: usize, c: &RealMat, scale: f64| {
        for a in 0..n {
            for b in 0..n {
                for cc in 0..n {
                    let v = c[(a, cc)] * scale;
                    if v != 0.0 {
                        jac[(row0 + a * n + b, col0 + cc * n + b)] += v;
                    }
                }
            }
        }
    };
    let put_right = |jac: &mut RealMat, row0: usize, col0: usize, r: &RealMat, scale: f64| {
        for a in 0..n {
            for b in 0..n {
                for d in 0..n {
                    let v = r[(d, b)] * scale;
                    if v != 0.0 {
                        jac[(row0 + a * n + b, col0 + a * n + d)] += v;
                    }
                }
            }
        }
    };
    let put_ident = |jac: &mut RealMat, row0: usize, col0: usize, scale: f64| {
        for p in 0..nsq {
            jac[(row0 + p, col0 + p)] += scale;
        }
    };

    let coeff = |k: i64| mid.coeff(k);

    // Row block f_⋆: ∂/∂Q_0 = I, ∂/∂Q_{j,1} = 2I.
    put_ident(&mut jac, 0, nsq, 1.0);
    for j in 1..m {
        put_ident(&mut jac, 0, 2 * nsq * j, 2.0);
    }

    // Row block f_0 = Q_0 R − (A·Q)_0.
    put_left(&mut jac, nsq, 0, &x.q[0].0, 1.0); // ∂/∂R
    put_right(&mut jac, nsq, nsq, &x.r_mat, 1.0);
    if let Some((a0re, _)) = coeff(0) {
        put_left(&mut jac, nsq, nsq, &a0re, -1.0);
    }
    for j in 1..m {
        if let Some((ajre, ajim)) = coeff(j as i64) {
            put_left(&mut jac, nsq, 2 * nsq * j, &ajre, -2.0);
            put_left(&mut jac, nsq, 2 * nsq * j + nsq, &ajim, -2.0);
        }
    }

    // Row blocks f_k.
    for k in 1..m {
        let row1 = 2 * nsq * k;
        let row2 = row1 + nsq;
        let kw = k as f64 * omega;
        // ∂/∂R
        put_left(&mut jac, row1, 0, &x.q[k].0, 1.0);
        put_left(&mut jac, row2, 0, &x.q[k].1, 1.0);
        // ∂/∂Q_0: −A_k (real into f_{k,1}, imaginary into f_{k,2})
        if let Some((akre, akim)) = coeff(k as i64) {
            put_left(&mut jac, row1, nsq, &akre, -1.0);
            put_left(&mut jac, row2, nsq, &akim, -1.0);
        }
        for j in 1..m {
            let col1 = 2 * nsq * j;
            let col2 = col1 + nsq;
            if j == k {
                put_right(&mut jac, row1, col1, &x.r_mat, 1.0);
                put_right(&mut jac, row2, col2, &x.r_mat, 1.0);
                put_ident(&mut jac, row1, col2, -kw);
                put_ident(&mut jac, row2, col1, kw);
            }
            let diff = coeff(k as i64 - j as i64);
            let sum = coeff(k as i64 + j as i64);
            if let Some((re, im)) = &diff {
                put_left(&mut jac, row1, col1, re, -1.0);
                put_left(&mut jac, row1, col2, &im.scale(-1.0), -1.0);
                put_left(&mut jac, row2, col1, im, -1.0);
                put_left(&mut jac, row2, col2, re, -1.0);
            }
            if let Some((re, im)) = &sum {
                put_left(&mut jac, row1, col1, re, -1.0);
                put_left(&mut jac, row1, col2, im, -1.0);
                put_left(&mut jac, row2, col1, im, -1.0);
                put_left(&mut jac, row2, col2, &re.scale(-1.0), -1.0);
            }
        }
    }
    jac
}

/// Interval enclosure of the projected Jacobian at the candidate; the
/// coefficient sequence supplies the interval data, the candidate is a point.
pub fn jacobian_interval(x: &FloquetCandidate, prob: &GalerkinProblem) -> Result<IntervalMatrix> {
    let n = x.n;
    let nsq = n * n;
    let m = x.m;
    let dim = 2 * nsq * m;
    let omega = pi().div(&prob.tau)?;
    let mut jac = IntervalMatrix::zeros(dim, dim);

    let add_left =
        |jac: &mut IntervalMatrix, row0: usize, col0: usize, c: &IntervalMatrix, scale: f64| {
            for a in 0..n {
                for b in 0..n {
                    for cc in 0..n {
                        let v = c[(a, cc)].scale(scale);
                        if v.lo() != 0.0 || v.hi() != 0.0 {
                            let idx = (row0 + a * n + b, col0 + cc * n + b);
                            jac[idx] = jac[idx].add(&v);
                        }
                    }
                }
            }
        };
    let add_right =
        |jac: &mut IntervalMatrix, row0: usize, col0: usize, r: &RealMat, scale: f64| {
            for a in 0..n {
                for b in 0..n {
                    for d in 0..n {
                        let v = r[(d, b)] * scale;
                        if v != 0.0 {
                            let idx = (row0 + a * n + b, col0 + a * n + d);
                            jac[idx] = jac[idx].add(&Interval::point(v));
                        }
                    }
                }
            }
        };
    let add_ident_iv =
        |jac: &mut IntervalMatrix, row0: usize, col0: usize, v: &Interval| {
            for p in 0..nsq {
                let idx = (row0 + p, col0 + p);
                jac[idx] = jac[idx].add(v);
            }
        };

    let coeff = |k: i64| prob.a_seq.coeff_pair(k);

    add_ident_iv(&mut jac, 0, nsq, &Interval::ONE);
    for j in 1..m {
        add_ident_iv(&mut jac, 0, 2 * nsq * j, &Interval::point(2.0));
    }

    let q0 = IntervalMatrix::from_fn(n, n, |i, j| Interval::point(x.q[0].0[(i, j)]));
    add_left(&mut jac, nsq, 0, &q0, 1.0);
    add_right(&mut jac, nsq, nsq, &x.r_mat, 1.0);
    let (a0re, _) = coeff(0);
    add_left(&mut jac, nsq, nsq, &a0re, -1.0);
    for j in 1..m {
        let (ajre, ajim) = coeff(j as i64);
        add_left(&mut jac, nsq, 2 * nsq * j, &ajre, -2.0);
        add_left(&mut jac, nsq, 2 * nsq * j + nsq, &ajim, -2.0);
    }

    for k in 1..m {
        let row1 = 2 * nsq * k;
        let row2 = row1 + nsq;
        let kw = omega.scale(k as f64);
        let qk1 = IntervalMatrix::from_fn(n, n, |i, j| Interval::point(x.q[k].0[(i, j)]));
        let qk2 = IntervalMatrix::from_fn(n, n, |i, j| Interval::point(x.q[k].1[(i, j)]));
        add_left(&mut jac, row1, 0, &qk1, 1.0);
        add_left(&mut jac, row2, 0, &qk2, 1.0);
        let (akre, akim) = coeff(k as i64);
        add_left(&mut jac, row1, nsq, &akre, -1.0);
        add_left(&mut jac, row2, nsq, &akim, -1.0);
        for j in 1..m {
            let col1 = 2 * nsq * j;
            let col2 = col1 + nsq;
            if j == k {
                add_right(&mut jac, row1, col1, &x.r_mat, 1.0);
                add_right(&mut jac, row2, col2, &x.r_mat, 1.0);
                add_ident_iv(&mut jac, row1, col2, &kw.neg());
                add_ident_iv(&mut jac, row2, col1, &kw);
            }
            let (dre, dim_) = coeff(k as i64 - j as i64);
            let (sre, sim) = coeff(k as i64 + j as i64);
            add_left(&mut jac, row1, col1, &dre, -1.0);
            add_left(&mut jac, row1, col2, &dim_.neg(), -1.0);
            add_left(&mut jac, row2, col1, &dim_, -1.0);
            add_left(&mut jac, row2, col2, &dre, -1.0);
            add_left(&mut jac, row1, col1, &sre, -1.0);
            add_left(&mut jac, row1, col2, &sim, -1.0);
            add_left(&mut jac, row2, col1, &sim, -1.0);
            add_left(&mut jac, row2, col2, &sre.neg(), -1.0);
        }
    }
    Ok(jac)
}
