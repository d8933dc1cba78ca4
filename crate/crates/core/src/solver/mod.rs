//! The zero-finding map for the normal form, its finite dimensional
//! projection, Newton refinement and the diagonal block operators.
//!
//! Unknowns are packed as `x = (R, Q_0, Q_{1,1}, Q_{1,2}, …)` with every
//! matrix flattened row major into length-n² blocks; block 0 holds `(R, Q_0)`
//! and block k ≥ 1 holds `(Q_{k,1}, Q_{k,2})`. The map reads
//!
//! ```text
//! f_⋆   = Q_0 + 2 Σ_{k≥1} Q_{k,1} − I
//! f_0   = Q_0 R − (A·Q)_0
//! f_k,1 = −k(π/τ) Q_{k,2} + Q_{k,1} R − (A·Q)_{k,1}
//! f_k,2 = +k(π/τ) Q_{k,1} + Q_{k,2} R − (A·Q)_{k,2}
//! ```
//!
//! with `(A·Q)_k` the discrete convolution of the coefficient sequences.

use crate::interval::{Interval, IntervalMatrix};
use crate::linalg::RealMat;
use crate::sequence::{MatrixFourierSeq, SeqCoeff};
use crate::system::OrbitEnclosure;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// The numerical candidate `x̄ = (R̄, Q̄_0, …, Q̄_{m−1})`; zero-width data.
#[derive(Debug, Clone)]
pub struct FloquetCandidate {
    pub n: usize,
    pub m: usize,
    /// Approximate half period τ̄ of the doubled-period expansion.
    pub tau: f64,
    pub r_mat: RealMat,
    /// Q̄_0 (imaginary part zero) and Q̄_k = (Q̄_{k,1}, Q̄_{k,2}), k = 1..m-1.
    pub q: Vec<(RealMat, RealMat)>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CandidateCoeff {
    k: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CandidateFile {
    n: usize,
    m: usize,
    tau: f64,
    #[serde(rename = "R")]
    r: Vec<Vec<f64>>,
    #[serde(rename = "Q")]
    q: Vec<CandidateCoeff>,
}

impl FloquetCandidate {
    /// Total packed length `2 n² m`.
    pub fn packed_len(&self) -> usize {
        2 * self.n * self.n * self.m
    }

    /// Pack into the block vector layout.
    pub fn pack(&self) -> Vec<f64> {
        let nsq = self.n * self.n;
        let mut out = Vec::with_capacity(self.packed_len());
        out.extend_from_slice(self.r_mat.data());
        out.extend_from_slice(self.q[0].0.data());
        for k in 1..self.m {
            out.extend_from_slice(self.q[k].0.data());
            out.extend_from_slice(self.q[k].1.data());
        }
        debug_assert_eq!(out.len(), 2 * nsq * self.m);
        out
    }

    /// Rebuild from the block vector layout.
    pub fn unpack(n: usize, m: usize, tau: f64, v: &[f64]) -> FloquetCandidate {
        let nsq = n * n;
        assert_eq!(v.len(), 2 * nsq * m);
        let grab = |off: usize| RealMat::from_vec(n, n, v[off..off + nsq].to_vec());
        let r_mat = grab(0);
        let mut q = vec![(grab(nsq), RealMat::zeros(n, n))];
        for k in 1..m {
            let off = 2 * nsq * k;
            q.push((grab(off), grab(off + nsq)));
        }
        FloquetCandidate { n, m, tau, r_mat, q }
    }

    /// View the Q part as a zero-width coefficient sequence.
    pub fn q_sequence(&self) -> MatrixFourierSeq {
        let n = self.n;
        let coeffs: Vec<SeqCoeff> = self
            .q
            .iter()
            .map(|(re, im)| SeqCoeff {
                re: IntervalMatrix::from_fn(n, n, |i, j| Interval::point(re[(i, j)])),
                im: IntervalMatrix::from_fn(n, n, |i, j| Interval::point(im[(i, j)])),
            })
            .collect();
        MatrixFourierSeq::new(n, Interval::point(self.tau), coeffs, 0.0, 2.0)
            .expect("candidate sequence is well formed")
    }

    /// Q sequence inflated to the verified ball: coefficients widened by
    /// `r·w_k^{-s}` and the unstored tail bounded by the same law.
    pub fn q_sequence_with_ball(&self, r: f64, s: f64) -> MatrixFourierSeq {
        let n = self.n;
        let coeffs: Vec<SeqCoeff> = self
            .q
            .iter()
            .enumerate()
            .map(|(k, (re, im))| {
                let pad = crate::sequence::ball_tail_bound(r, s, k as i64);
                SeqCoeff {
                    re: IntervalMatrix::from_fn(n, n, |i, j| Interval::point(re[(i, j)]))
                        .inflate(pad),
                    im: if k == 0 {
                        IntervalMatrix::zeros(n, n)
                    } else {
                        IntervalMatrix::from_fn(n, n, |i, j| Interval::point(im[(i, j)]))
                            .inflate(pad)
                    },
                }
            })
            .collect();
        MatrixFourierSeq::new(n, Interval::point(self.tau), coeffs, r, s)
            .expect("ball sequence is well formed")
    }

    pub fn to_json(&self) -> String {
        let file = CandidateFile {
            n: self.n,
            m: self.m,
            tau: self.tau,
            r: mat_to_rows(&self.r_mat),
            q: self
                .q
                .iter()
                .enumerate()
                .map(|(k, (re, im))| CandidateCoeff {
                    k,
                    re: mat_to_rows(re),
                    im: mat_to_rows(im),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<FloquetCandidate> {
        let file: CandidateFile =
            serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))?;
        let n = file.n;
        if file.q.len() != file.m {
            return Err(Error::MalformedInput(format!(
                "m = {} but {} Q coefficients",
                file.m,
                file.q.len()
            )));
        }
        let to_mat = |rows: &Vec<Vec<f64>>, what: &str| -> Result<RealMat> {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::MalformedInput(format!("{what} is not {n}x{n}")));
            }
            Ok(RealMat::from_rows(rows))
        };
        let r_mat = to_mat(&file.r, "R")?;
        let mut q = vec![(RealMat::zeros(n, n), RealMat::zeros(n, n)); file.m];
        let mut seen = vec![false; file.m];
        for c in &file.q {
            if c.k >= file.m {
                return Err(Error::MalformedInput(format!("Q index {} out of range", c.k)));
            }
            q[c.k] = (to_mat(&c.re, "Q.re")?, to_mat(&c.im, "Q.im")?);
            seen[c.k] = true;
        }
        if let Some(k) = seen.iter().position(|s| !s) {
            return Err(Error::MalformedInput(format!("Q coefficient {k} missing")));
        }
        if file.tau <= 0.0 {
            return Err(Error::MalformedInput("tau must be positive".into()));
        }
        Ok(FloquetCandidate { n, m: file.m, tau: file.tau, r_mat, q })
    }
}

fn mat_to_rows(m: &RealMat) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// One independent parameter of the coefficient enclosure: a direction in
/// sequence space and the radius the parameter may deviate by. The stored
/// intervals of the problem sequence must be generated by
/// `midpoint ± Σ_p radius_p · delta_p`.
#[derive(Debug, Clone)]
pub struct BallDirection {
    pub delta: MatrixFourierSeq,
    pub radius: f64,
}

/// The finite dimensional projection data: coefficient sequence of the
/// linear system, Galerkin size, decay rate and period enclosure.
#[derive(Debug, Clone)]
pub struct GalerkinProblem {
    pub a_seq: MatrixFourierSeq,
    pub m: usize,
    pub s: f64,
    pub tau: Interval,
    /// Correlated parameter structure of the enclosure, when known.
    pub ball: Option<Vec<BallDirection>>,
}

impl GalerkinProblem {
    pub fn new(a_seq: MatrixFourierSeq, m: usize, s: f64) -> Result<GalerkinProblem> {
        if m < 2 {
            return Err(Error::DomainError(format!("Galerkin size m = {m} < 2")));
        }
        if s < 2.0 || s > a_seq.tail_s() {
            return Err(Error::DecayTooWeak { requested: s, available: a_seq.tail_s() });
        }
        let tau = a_seq.half_period();
        Ok(GalerkinProblem { a_seq, m, s, tau, ball: None })
    }

    pub fn n(&self) -> usize {
        self.a_seq.n()
    }

    /// Midpoint coefficient data for fast floating point evaluation.
    pub fn midpoint(&self) -> ProblemMid {
        let n = self.n();
        let coeffs = (0..self.a_seq.stored_len())
            .map(|k| {
                let c = self.a_seq.stored(k);
                (
                    RealMat::from_vec(n, n, c.re.midpoint()),
                    RealMat::from_vec(n, n, c.im.midpoint()),
                )
            })
            .collect();
        ProblemMid { n, coeffs, tau: self.tau.mid() }
    }
}

/// Midpoint view of the problem coefficients.
#[derive(Debug, Clone)]
pub struct ProblemMid {
    pub n: usize,
    pub coeffs: Vec<(RealMat, RealMat)>,
    pub tau: f64,
}

impl ProblemMid {
    /// (re, im) of coefficient at signed index; zero beyond storage.
    fn coeff(&self, k: i64) -> Option<(RealMat, RealMat)> {
        let idx = k.unsigned_abs() as usize;
        if idx >= self.coeffs.len() {
            return None;
        }
        let (re, im) = &self.coeffs[idx];
        Some(if k >= 0 { (re.clone(), im.clone()) } else { (re.clone(), im.scale(-1.0)) })
    }
}

mod feval;
mod guess;
mod lambda;
mod newton;

pub use feval::{f_eval, f_eval_point, jacobian_assemble, jacobian_interval, FComponents};
pub use guess::init_guess;
pub use lambda::{lambda_k, lambda_k_inverse, CertifiedInverse};
pub use newton::{newton_refine, residual_norm};

/// The approximate inverse: a dense block for the first m modes and
/// certified diagonal inverses above them.
#[derive(Debug, Clone)]
pub struct BlockOperator {
    pub n: usize,
    pub m: usize,
    pub big_m: usize,
    /// Approximate inverse of the projected Jacobian, 2n²m square.
    pub a_m: RealMat,
    /// The projected Jacobian that was inverted (midpoint data).
    pub df_m: RealMat,
    /// Certified enclosures of Λ_k^{-1}, k = m..M-1.
    pub lambda_inv: Vec<CertifiedInverse>,
    /// Midpoints of Λ_k, k = m..M-1.
    pub lambda_mid: Vec<RealMat>,
}

impl BlockOperator {
    /// Apply the operator to packed point data with blocks 0..M-1
    /// (midpoint arithmetic; diagnostics only).
    pub fn apply_a(&self, x: &[f64]) -> Vec<f64> {
        let nsq = self.n * self.n;
        let head = 2 * nsq * self.m;
        assert_eq!(x.len(), 2 * nsq * self.big_m);
        let mut out = self.a_m.mul_vec(&x[..head]);
        out.reserve(x.len() - head);
        for k in self.m..self.big_m {
            let off = 2 * nsq * k;
            let b = &self.lambda_inv[k - self.m];
            let mid = b.enclosure.midpoint();
            let dim = 2 * nsq;
            for i in 0..dim {
                let mut acc = 0.0;
                for j in 0..dim {
                    acc += mid[i * dim + j] * x[off + j];
                }
                out.push(acc);
            }
        }
        out
    }

    /// Apply the almost-inverse `A†`: the projected Jacobian on the head
    /// blocks and Λ_k on the rest (midpoint arithmetic; diagnostics only).
    pub fn apply_a_dag(&self, x: &[f64]) -> Vec<f64> {
        let nsq = self.n * self.n;
        let head = 2 * nsq * self.m;
        assert_eq!(x.len(), 2 * nsq * self.big_m);
        let mut out = self.df_m.mul_vec(&x[..head]);
        out.reserve(x.len() - head);
        for k in self.m..self.big_m {
            let off = 2 * nsq * k;
            let lam = &self.lambda_mid[k - self.m];
            out.extend(lam.mul_vec(&x[off..off + 2 * nsq]));
        }
        out
    }
}


/// Build a Galerkin problem from a validated orbit, carrying the orbit-ball
/// parameter structure: each orbit coefficient component is one independent
/// deviation direction with radius `r_γ w_l^{-s★}`.
pub fn problem_from_orbit(orbit: &OrbitEnclosure, m: usize, s: f64) -> Result<GalerkinProblem> {
    let a_seq = orbit.jacobian_coeffs()?;
    let mut prob = GalerkinProblem::new(a_seq, m, s)?;
    if orbit.r_gamma > 0.0 {
        let quad = orbit.field.quadratic_form()?;
        let (_, ji) = quad.jacobian_parts();
        let n = orbit.field.n;
        let stored = 2 * orbit.m_gamma + 1;
        let mut dirs = Vec::new();
        for l in 0..=orbit.m_gamma {
            let radius = crate::sequence::ball_tail_bound(orbit.r_gamma, orbit.s_star, l as i64);
            for jmat in &ji {
                if jmat.max_abs() == 0.0 {
                    continue;
                }
                let pattern = IntervalMatrix::from_fn(n, n, |a, b| {
                    crate::interval::Interval::point(jmat[(a, b)])
                });
                for imag in [false, true] {
                    if l == 0 && imag {
                        continue;
                    }
                    let mut coeffs = vec![
                        SeqCoeff {
                            re: IntervalMatrix::zeros(n, n),
                            im: IntervalMatrix::zeros(n, n),
                        };
                        stored.min(2 * l + 1)
                    ];
                    let slot = coeffs.last_mut().expect("nonempty");
                    if imag {
                        slot.im = pattern.clone();
                    } else {
                        slot.re = pattern.clone();
                    }
                    let delta =
                        MatrixFourierSeq::new(n, prob.tau, coeffs, 0.0, orbit.s_star)?;
                    dirs.push(BallDirection { delta, radius });
                }
            }
        }
        prob.ball = Some(dirs);
    }
    Ok(prob)
}
