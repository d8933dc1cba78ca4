//! Matrix Fourier sequences with algebraic decay tails.
//!
//! A [`MatrixFourierSeq`] stores finitely many coefficient matrices of a real
//! matrix function expanded in `e^{ik(π/τ)t}` together with a tail bound
//! `|x_k|_∞ ≤ C·w_k^{-s}` for the unstored modes, where `w_k = max(|k|, 1)`.
//! Negative indices are implied by conjugate symmetry. This is the working
//! representation for both the coefficient matrices of the linear system and
//! the periodic factor of the normal form.

use crate::interval::{cos_enclosure, pi, pow_enclosure, sin_enclosure, up, Interval, IntervalMatrix};
use crate::verifier::zeta_upper;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// The weight `w_k = max(|k|, 1)` of the s-norm.
#[inline]
pub fn weight(k: i64) -> f64 {
    (k.unsigned_abs().max(1)) as f64
}

/// Enclosure of `w_k^s`.
pub fn weight_pow(k: i64, s: f64) -> Interval {
    pow_enclosure(&Interval::point(weight(k)), s).expect("positive weight")
}

/// Upper bound of `w_k^{-s}`.
pub fn weight_pow_neg_upper(k: i64, s: f64) -> f64 {
    pow_enclosure(&Interval::point(weight(k)), -s).expect("positive weight").hi()
}

/// Upper bound of `r·w_k^{-s}`: the size of the k-th coefficient of a ball
/// element factored as `b = r·u` with `u` in the unit ball.
pub fn ball_tail_bound(r: f64, s: f64, k: i64) -> f64 {
    assert!(r >= 0.0, "negative radius");
    if r == 0.0 {
        return 0.0;
    }
    up(r * weight_pow_neg_upper(k, s))
}

/// One stored coefficient: real and imaginary part enclosures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeqCoeff {
    pub re: IntervalMatrix,
    pub im: IntervalMatrix,
}

#[derive(Serialize, Deserialize)]
struct SeqFileCoeff {
    k: usize,
    re: IntervalMatrix,
    im: IntervalMatrix,
}

#[derive(Serialize, Deserialize)]
struct SeqFile {
    n: usize,
    half_period: Interval,
    s_tail: f64,
    #[serde(rename = "C_tail")]
    c_tail: f64,
    coeffs: Vec<SeqFileCoeff>,
}

/// Finite list of Fourier coefficient matrices plus a decay tail bound.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFourierSeq {
    n: usize,
    half_period: Interval,
    coeffs: Vec<SeqCoeff>,
    tail_c: f64,
    tail_s: f64,
}

impl MatrixFourierSeq {
    /// Build a sequence; the index-0 coefficient must be real and the tail
    /// must satisfy `C ≥ 0`, `s ≥ 2`.
    pub fn new(
        n: usize,
        half_period: Interval,
        coeffs: Vec<SeqCoeff>,
        tail_c: f64,
        tail_s: f64,
    ) -> Result<MatrixFourierSeq> {
        if coeffs.is_empty() {
            return Err(Error::DimensionMismatch("sequence needs a k=0 coefficient".into()));
        }
        if tail_c.is_nan() || tail_c < 0.0 || tail_s.is_nan() || tail_s < 2.0 {
            return Err(Error::DomainError(format!(
                "tail bound needs C >= 0 and s >= 2, got C={tail_c}, s={tail_s}"
            )));
        }
        for (k, c) in coeffs.iter().enumerate() {
            if c.re.rows() != n || c.re.cols() != n || c.im.rows() != n || c.im.cols() != n {
                return Err(Error::DimensionMismatch(format!("coefficient {k} is not {n}x{n}")));
            }
        }
        if coeffs[0].im.abs_sup() != 0.0 {
            return Err(Error::DomainError("k=0 coefficient must have exact zero imaginary part".into()));
        }
        if half_period.lo() <= 0.0 {
            return Err(Error::DomainError("half period must be positive".into()));
        }
        Ok(MatrixFourierSeq { n, half_period, coeffs, tail_c, tail_s })
    }

    /// All-zero sequence with an empty tail.
    pub fn zero(n: usize, half_period: Interval, len: usize) -> MatrixFourierSeq {
        let z = SeqCoeff { re: IntervalMatrix::zeros(n, n), im: IntervalMatrix::zeros(n, n) };
        MatrixFourierSeq {
            n,
            half_period,
            coeffs: vec![z; len.max(1)],
            tail_c: 0.0,
            tail_s: 2.0,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn half_period(&self) -> Interval {
        self.half_period
    }

    /// Number of stored coefficients (indices 0..len-1).
    #[inline]
    pub fn stored_len(&self) -> usize {
        self.coeffs.len()
    }

    #[inline]
    pub fn tail_c(&self) -> f64 {
        self.tail_c
    }

    #[inline]
    pub fn tail_s(&self) -> f64 {
        self.tail_s
    }

    pub fn stored(&self, k: usize) -> &SeqCoeff {
        &self.coeffs[k]
    }

    pub fn stored_mut(&mut self, k: usize) -> &mut SeqCoeff {
        &mut self.coeffs[k]
    }

    /// True when the k-th coefficient is the exact zero matrix pair.
    pub fn is_stored_zero(&self, k: usize) -> bool {
        self.coeffs[k].re.abs_sup() == 0.0 && self.coeffs[k].im.abs_sup() == 0.0
    }

    /// Enclosure of the coefficient at any integer index. Negative indices
    /// use conjugate symmetry, unstored indices the tail box.
    pub fn coeff_pair(&self, k: i64) -> (IntervalMatrix, IntervalMatrix) {
        let idx = k.unsigned_abs() as usize;
        if idx < self.coeffs.len() {
            let c = &self.coeffs[idx];
            if k >= 0 {
                (c.re.clone(), c.im.clone())
            } else {
                (c.re.clone(), c.im.neg())
            }
        } else {
            let b = up(self.tail_c * weight_pow_neg_upper(k, self.tail_s));
            (
                IntervalMatrix::symmetric(self.n, self.n, b),
                IntervalMatrix::symmetric(self.n, self.n, b),
            )
        }
    }

    /// Upper bound of `|x_k|_∞` at any index.
    pub fn coeff_abs_upper(&self, k: i64) -> f64 {
        let idx = k.unsigned_abs() as usize;
        if idx < self.coeffs.len() {
            let c = &self.coeffs[idx];
            let mut best: f64 = 0.0;
            for i in 0..self.n {
                for j in 0..self.n {
                    let z = crate::interval::ComplexInterval::new(c.re[(i, j)], c.im[(i, j)]);
                    best = best.max(z.abs_upper());
                }
            }
            best
        } else {
            up(self.tail_c * weight_pow_neg_upper(k, self.tail_s))
        }
    }

    /// Rigorous upper bound of the s-norm `sup_k |x_k|_∞ w_k^s`.
    pub fn s_norm_bound(&self, s: f64) -> Result<f64> {
        if s > self.tail_s {
            return Err(Error::DecayTooWeak { requested: s, available: self.tail_s });
        }
        let mut best: f64 = 0.0;
        for k in 0..self.coeffs.len() {
            let a = self.coeff_abs_upper(k as i64);
            if a == 0.0 {
                continue;
            }
            let wk = pow_enclosure(&Interval::point(weight(k as i64)), s)?.hi();
            best = best.max(up(a * wk));
        }
        if self.tail_c > 0.0 {
            // For k >= len: |x_k| w_k^s <= C w_k^{s - tail_s} <= C w_len^{s - tail_s}.
            let w = pow_enclosure(&Interval::point(weight(self.coeffs.len() as i64)), s - self.tail_s)?;
            best = best.max(up(self.tail_c * w.hi()));
        }
        Ok(best)
    }

    /// Upper bound of `sup_k |x_k|_∞`.
    pub fn sup_abs_bound(&self) -> f64 {
        self.s_norm_bound(0.0).unwrap_or(f64::INFINITY)
    }

    /// Enclosure of the convolution coefficient `(A·Q)_k`, split into real and
    /// imaginary parts. Stored terms with `|k₂| ≤ cutoff` are summed exactly;
    /// the rest is folded into a rigorous remainder using both tail bounds.
    pub fn convolve(
        a: &MatrixFourierSeq,
        q: &MatrixFourierSeq,
        k: i64,
        cutoff: usize,
    ) -> Result<(IntervalMatrix, IntervalMatrix)> {
        if a.n != q.n {
            return Err(Error::DimensionMismatch(format!(
                "convolution of {}x{} with {}x{}",
                a.n, a.n, q.n, q.n
            )));
        }
        let n = a.n;
        let mut re = IntervalMatrix::zeros(n, n);
        let mut im = IntervalMatrix::zeros(n, n);
        let c = cutoff as i64;
        for k2 in -c..=c {
            let aidx = (k - k2).unsigned_abs() as usize;
            let qidx = k2.unsigned_abs() as usize;
            let a_zero = aidx < a.coeffs.len() && a.is_stored_zero(aidx);
            let q_zero = if qidx < q.coeffs.len() {
                q.is_stored_zero(qidx)
            } else {
                q.tail_c == 0.0
            };
            let a_tail_zero = aidx >= a.coeffs.len() && a.tail_c == 0.0;
            if a_zero || q_zero || a_tail_zero {
                continue;
            }
            let (are, aim) = a.coeff_pair(k - k2);
            let (qre, qim) = q.coeff_pair(k2);
            re = re.try_add(&are.try_mul(&qre)?)?.try_sub(&aim.try_mul(&qim)?)?;
            im = im.try_add(&are.try_mul(&qim)?)?.try_add(&aim.try_mul(&qre)?)?;
        }
        // Remainder over |k2| > cutoff.
        let q_rest = if (cutoff + 1) < q.coeffs.len() {
            // Stored q coefficients beyond the cutoff: sum them explicitly.
            let mut extra_re = IntervalMatrix::zeros(n, n);
            let mut extra_im = IntervalMatrix::zeros(n, n);
            for k2abs in (cutoff + 1)..q.coeffs.len() {
                for sign in [1i64, -1] {
                    let k2 = sign * k2abs as i64;
                    let (are, aim) = a.coeff_pair(k - k2);
                    let (qre, qim) = q.coeff_pair(k2);
                    extra_re =
                        extra_re.try_add(&are.try_mul(&qre)?)?.try_sub(&aim.try_mul(&qim)?)?;
                    extra_im =
                        extra_im.try_add(&are.try_mul(&qim)?)?.try_add(&aim.try_mul(&qre)?)?;
                }
            }
            re = re.try_add(&extra_re)?;
            im = im.try_add(&extra_im)?;
            q.coeffs.len() - 1
        } else {
            cutoff
        };
        if q.tail_c > 0.0 {
            let zeta = zeta_upper(q_rest.max(1), q.tail_s)?;
            let bound = up(2.0 * (n as f64) * a.sup_abs_bound() * q.tail_c * zeta);
            re = re.inflate(bound);
            im = im.inflate(bound);
        }
        Ok((re, im))
    }

    /// Enclosure of the function value at `θ`:
    /// `Q(θ) = Q₀ + Σ_{k≥1} 2(Q_{k,1} cos(kπθ/τ) − Q_{k,2} sin(kπθ/τ))` plus
    /// the tail bound `2·C·ζ(N−1, s)`.
    pub fn eval_at(&self, theta: &Interval) -> IntervalMatrix {
        let omega = pi().div(&self.half_period).expect("positive half period");
        let base = omega.mul(theta);
        let mut acc = self.coeffs[0].re.clone();
        for k in 1..self.coeffs.len() {
            if self.is_stored_zero(k) {
                continue;
            }
            let ang = base.scale(k as f64);
            let ck = cos_enclosure(&ang);
            let sk = sin_enclosure(&ang);
            let term = self.coeffs[k]
                .re
                .scale_iv(&ck)
                .try_sub(&self.coeffs[k].im.scale_iv(&sk))
                .expect("shape");
            acc = acc.try_add(&term.scale(2.0)).expect("shape");
        }
        if self.tail_c > 0.0 {
            let z = zeta_upper((self.coeffs.len() - 1).max(1), self.tail_s)
                .expect("valid tail decay");
            acc = acc.inflate(up(2.0 * self.tail_c * z));
        }
        acc
    }

    /// Serialize to the sequence JSON format:
    /// `{n, half_period, s_tail, C_tail, coeffs: [{k, re, im}]}`.
    pub fn to_json(&self) -> String {
        let file = SeqFile {
            n: self.n,
            half_period: self.half_period,
            s_tail: self.tail_s,
            c_tail: self.tail_c,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| SeqFileCoeff { k, re: c.re.clone(), im: c.im.clone() })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    /// Parse the sequence JSON format (outward on endpoints).
    pub fn from_json(text: &str) -> Result<MatrixFourierSeq> {
        let file: SeqFile =
            serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))?;
        let mut coeffs =
            vec![
                SeqCoeff {
                    re: IntervalMatrix::zeros(file.n, file.n),
                    im: IntervalMatrix::zeros(file.n, file.n)
                };
                file.coeffs.len()
            ];
        let mut seen = vec![false; file.coeffs.len()];
        for c in file.coeffs {
            if c.k >= coeffs.len() {
                return Err(Error::MalformedInput(format!("coefficient index {} out of range", c.k)));
            }
            seen[c.k] = true;
            coeffs[c.k] = SeqCoeff { re: c.re, im: c.im };
        }
        if let Some(k) = seen.iter().position(|s| !s) {
            return Err(Error::MalformedInput(format!("coefficient {k} missing")));
        }
        MatrixFourierSeq::new(file.n, file.half_period, coeffs, file.c_tail, file.s_tail)
    }

    /// Check conjugate-symmetric realness: summing the full series over a
    /// θ grid must produce enclosures whose imaginary parts contain zero.
    /// The stored representation keeps only k ≥ 0, so the imaginary part of
    /// the reconstructed sum vanishes identically; this evaluates the
    /// explicit two-sided sum as a cross check and returns the largest
    /// imaginary magnitude lower bound (0 when consistent).
    pub fn realness_defect(&self, grid: usize) -> f64 {
        let omega = pi().div(&self.half_period).expect("positive half period");
        let mut worst: f64 = 0.0;
        for g in 0..grid {
            let theta = self.half_period.scale(2.0 * g as f64 / grid as f64);
            let base = omega.mul(&theta);
            let mut im_acc = IntervalMatrix::zeros(self.n, self.n);
            for k_idx in 1..self.coeffs.len() {
                for sign in [1i64, -1] {
                    let k = sign * k_idx as i64;
                    let ang = base.scale(k as f64);
                    let ck = cos_enclosure(&ang);
                    let sk = sin_enclosure(&ang);
                    let (re, im) = self.coeff_pair(k);
                    // Im[(re + i im)(cos + i sin)] = re sin + im cos
                    let t = re.scale_iv(&sk).try_add(&im.scale_iv(&ck)).expect("shape");
                    im_acc = im_acc.try_add(&t).expect("shape");
                }
            }
            for i in 0..self.n {
                for j in 0..self.n {
                    worst = worst.max(im_acc[(i, j)].mig());
                }
            }
        }
        worst
    }
}
