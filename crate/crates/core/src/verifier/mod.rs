//! Radii polynomial verification.
//!
//! Builds the bounds `Y` (residual of the Newton-like operator at the
//! candidate) and `Z(r)` (derivative bound over the candidate ball), folds
//! the unstored modes into analytic tail constants, assembles the radii
//! polynomials `p_k(r) = Y_k + Z_k(r) − r/w_k^s` and searches the interval of
//! radii on which all of them are negative. A nonempty interval proves that
//! the Newton-like operator contracts the ball of that radius around the
//! candidate, so a unique true solution lies inside it.

mod bounds;
mod polys;

pub use bounds::{w_matrix_colsums, y_bounds, z_bounds};
pub use polys::{assemble_and_solve, negativity_interval};

use crate::interval::{ln_enclosure, pi, pow_enclosure, Interval, IntervalMatrix};
use crate::linalg::RealMat;
use crate::sequence::MatrixFourierSeq;
use crate::solver::{
    jacobian_assemble, lambda_k, lambda_k_inverse, BlockOperator,
    FloquetCandidate, GalerkinProblem,
};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Upper bound of `Σ_{k>M} k^{-s}`:
/// `ζ(M,s) = (M+1)^{-s} + (M+2)^{-s} + (M+2)^{1-s}/(s−1)`.
pub fn zeta_upper(m: usize, s: f64) -> Result<f64> {
    if m < 1 || s <= 1.0 {
        return Err(Error::DomainError(format!("zeta needs M >= 1 and s > 1, got ({m}, {s})")));
    }
    Ok(zeta_iv(m, s)?.hi())
}

fn zeta_iv(m: usize, s: f64) -> Result<Interval> {
    let m1 = Interval::point((m + 1) as f64);
    let m2 = Interval::point((m + 2) as f64);
    let t1 = pow_enclosure(&m1, -s)?;
    let t2 = pow_enclosure(&m2, -s)?;
    let t3 = pow_enclosure(&m2, 1.0 - s)?.div(&Interval::point(s - 1.0))?;
    Ok(t1.add(&t2).add(&t3))
}

/// Upper bound of the quadratic-sum constant
/// `η_k = 2[k/(k−1)]^s + [4 log(k−2)/k + (π²−6)/3]·[2/k + 1/2]^{s−2}`.
pub fn eta_upper(k: usize, s: f64) -> Result<f64> {
    if k < 3 || s < 2.0 {
        return Err(Error::DomainError(format!("eta needs k >= 3 and s >= 2, got ({k}, {s})")));
    }
    let kf = Interval::point(k as f64);
    let ratio = kf.div(&Interval::point((k - 1) as f64))?;
    let first = pow_enclosure(&ratio, s)?.scale(2.0);
    let log_term = if k == 3 {
        Interval::ZERO
    } else {
        ln_enclosure(&Interval::point((k - 2) as f64))?
    };
    let bracket1 = log_term.scale(4.0).div(&kf)?.add(
        &pi().square().sub(&Interval::point(6.0)).div(&Interval::point(3.0))?,
    );
    let base2 = Interval::point(2.0).div(&kf)?.add(&Interval::point(0.5));
    let bracket2 = pow_enclosure(&base2, s - 2.0)?;
    Ok(first.add(&bracket1.mul(&bracket2)).hi())
}

/// Upper bound of the convolution-sum constant
/// `C₁ = 2 + 2 Σ_{l=1}^{M} l^{-s} + 2/(M^{s−1}(s−1)) + η_M − 1`.
pub fn c1_upper(big_m: usize, s: f64) -> Result<f64> {
    let mut sum = Interval::ZERO;
    for l in 1..=big_m {
        sum = sum.add(&pow_enclosure(&Interval::point(l as f64), -s)?);
    }
    let mtail = pow_enclosure(&Interval::point(big_m as f64), 1.0 - s)?
        .scale(2.0)
        .div(&Interval::point(s - 1.0))?;
    let eta = eta_upper(big_m, s)?;
    Ok(Interval::point(1.0)
        .add(&sum.scale(2.0))
        .add(&mtail)
        .add(&Interval::point(eta))
        .hi())
}

/// How the per-mode series cutoffs `L_k` are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LPolicy {
    /// `L_k = M + M_A + k` with `M_A` the highest stored coefficient index
    /// of the problem data in its own period units. This keeps the analytic
    /// tails supported entirely on modes bounded by the tail law.
    Paper,
    /// `L_k = max(k, m) + N` with a fixed offset `N ≥ 1`.
    Fixed(usize),
}

/// Whether the sharpened coefficient-aware tail estimates are used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SharpMode {
    /// Sharp wherever the stored coefficients cover the touched indices.
    Auto,
    On,
    Off,
}

/// Verification parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifierParams {
    /// Decay rate of the solution space, `2 ≤ s ≤ s★`.
    pub s: f64,
    /// Galerkin size (must match the candidate).
    pub m: usize,
    /// Number of explicit radii polynomials (`M > m`).
    pub big_m: usize,
    pub l_policy: LPolicy,
    pub sharp: SharpMode,
    /// Sanity cap for the diagonal dominance search.
    pub k_cap: usize,
}

impl VerifierParams {
    pub fn new(s: f64, m: usize, big_m: usize) -> VerifierParams {
        VerifierParams { s, m, big_m, l_policy: LPolicy::Paper, sharp: SharpMode::Auto, k_cap: 1_000_000 }
    }

    /// The series cutoff for mode k.
    pub fn l_k(&self, k: usize, a_stored_max: usize) -> usize {
        match self.l_policy {
            LPolicy::Paper => self.big_m + a_stored_max.div_ceil(2) + k,
            LPolicy::Fixed(n) => k.max(self.m) + n.max(1),
        }
    }
}

/// Scalar margin data for one radii polynomial block.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MarginEntry {
    /// Block index; `big_m` denotes the tail polynomial.
    pub k: usize,
    /// Flat index of the worst scalar entry inside the block.
    pub worst_entry: usize,
    /// Upper bound of that entry's polynomial at the certified radius.
    #[serde(rename = "value_at_rmin")]
    pub value_at_rsel: f64,
}

/// Everything the verification produced.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub s: f64,
    pub m: usize,
    pub big_m: usize,
    pub l_policy: LPolicy,
    pub sharp_used: bool,
    pub k_lemma: usize,
    pub c_lambda: f64,
    /// Interval of admissible radii (empty on failure).
    pub r_interval: Option<(f64, f64)>,
    /// The radius actually certified by the final direct check.
    pub r_selected: Option<f64>,
    pub success: bool,
    /// True when the orbit data is an unverified candidate: every claim is
    /// then conditional on the orbit hypothesis.
    pub conditional: bool,
    pub margins: Vec<MarginEntry>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// A candidate together with a proven error radius in the s-norm: the true
/// normal form lies within `r` of the candidate, coefficient-wise weighted
/// by `w_k^{-s}`.
#[derive(Debug, Clone)]
pub struct VerifiedFloquetForm {
    pub candidate: FloquetCandidate,
    pub radius: f64,
    pub s: f64,
    /// Period enclosure of the underlying problem.
    pub tau: Interval,
    pub conditional: bool,
}

impl VerifiedFloquetForm {
    /// Enclosure of the constant matrix: candidate ± r.
    pub fn r_enclosure(&self) -> IntervalMatrix {
        let n = self.candidate.n;
        IntervalMatrix::from_fn(n, n, |i, j| {
            Interval::with_radius(self.candidate.r_mat[(i, j)], self.radius)
        })
    }

    /// The periodic factor as a sequence widened by the proven ball.
    pub fn q_enclosure(&self) -> MatrixFourierSeq {
        self.candidate.q_sequence_with_ball(self.radius, self.s)
    }
}

/// Diagonal dominance data: the first index from which the permuted blocks
/// are certifiably diagonally dominant, and a constant with
/// `‖Λ_k^{-1}‖_∞ ≤ C_Λ/k` for every `k ≥ m`.
pub fn compute_k_c_lambda(
    r_bar: &RealMat,
    a_seq: &MatrixFourierSeq,
    tau: &Interval,
    m: usize,
    k_cap: usize,
) -> Result<(usize, f64)> {
    let n = a_seq.n();
    let col_r = Interval::point(r_bar.norm_1());
    let row_a0 = Interval::point(a_seq.stored(0).re.rowsum_norm());
    let a_lo = pi().div(tau)?;

    // Monotone majorant of |A_{2k}|_∞ for all k' >= k.
    let stored = a_seq.stored_len();
    let mut suffix = vec![0.0f64; stored + 1];
    for idx in (0..stored).rev() {
        suffix[idx] = suffix[idx + 1].max(a_seq.coeff_abs_upper(idx as i64));
    }
    let t_of = |k: usize| -> f64 {
        let idx = 2 * k;
        let stored_part = if idx < stored { suffix[idx] } else { 0.0 };
        let tail_part = a_seq.coeff_abs_upper(stored.max(idx) as i64);
        stored_part.max(tail_part)
    };
    let delta = |k: usize| -> Interval {
        a_lo.scale(k as f64)
            .sub(&col_r)
            .sub(&row_a0)
            .sub(&Interval::point(2.0 * n as f64 * t_of(k)))
    };

    let mut k_lemma = None;
    for k in 1..=k_cap {
        if delta(k).lo() > 0.0 {
            k_lemma = Some(k);
            break;
        }
    }
    let Some(k_lemma) = k_lemma else {
        return Err(Error::NoDominanceBelowCutoff(k_cap));
    };

    // Analytic piece: sup_{k >= kk} k/δ(k) = kk/δ(kk).
    let kk = k_lemma.max(m);
    let analytic = Interval::point(kk as f64).div(&delta(kk))?.hi();
    let mut c_lambda = analytic;

    // Certified piece for k in [m, kk).
    for k in m..kk {
        let lam = lambda_k(k, r_bar, a_seq, tau)?;
        let inv = lambda_k_inverse(&lam)?;
        c_lambda = c_lambda.max(crate::interval::up(inv.norm_upper * k as f64));
    }
    Ok((k_lemma, c_lambda))
}

/// Assemble the block operator: approximate inverse of the projected
/// Jacobian plus certified diagonal inverses for `k = m..M-1`.
pub fn build_block_operator(
    x: &FloquetCandidate,
    prob: &GalerkinProblem,
    big_m: usize,
) -> Result<BlockOperator> {
    let mid = prob.midpoint();
    let df_m = jacobian_assemble(x, &mid);
    let a_m = df_m.inverse().map_err(|_| {
        Error::VerificationFailed("projected Jacobian numerically singular".into())
    })?;
    let mut lambda_inv = Vec::with_capacity(big_m - prob.m);
    let mut lambda_mid = Vec::with_capacity(big_m - prob.m);
    for k in prob.m..big_m {
        let lam = lambda_k(k, &x.r_mat, &prob.a_seq, &prob.tau)?;
        let dim = lam.rows();
        lambda_mid.push(crate::linalg::RealMat::from_vec(dim, dim, lam.midpoint()));
        lambda_inv.push(lambda_k_inverse(&lam)?);
    }
    Ok(BlockOperator { n: prob.n(), m: prob.m, big_m, a_m, df_m, lambda_inv, lambda_mid })
}

/// Full verification of a candidate against a Galerkin problem.
pub fn verify_problem(
    x: &FloquetCandidate,
    prob: &GalerkinProblem,
    params: &VerifierParams,
    conditional: bool,
) -> Result<(VerifiedFloquetForm, VerificationReport)> {
    if params.m != x.m {
        return Err(Error::DimensionMismatch(format!(
            "params.m = {} but candidate has m = {}",
            params.m, x.m
        )));
    }
    if params.big_m <= params.m {
        return Err(Error::DomainError(format!(
            "need M > m, got M = {}, m = {}",
            params.big_m, params.m
        )));
    }
    if params.s < 2.0 || params.s > prob.a_seq.tail_s() {
        return Err(Error::DecayTooWeak { requested: params.s, available: prob.a_seq.tail_s() });
    }

    let mut notes = Vec::new();
    let (k_lemma, c_lambda) =
        compute_k_c_lambda(&x.r_mat, &prob.a_seq, &prob.tau, params.m, params.k_cap)?;
    if params.m <= k_lemma {
        notes.push(format!(
            "m = {} is not above the dominance index K = {k_lemma}; inverses for the gap were certified directly",
            params.m
        ));
    }

    let op = build_block_operator(x, prob, params.big_m)?;
    let (y, y_m, sharp_y) = y_bounds(x, prob, &op, params, c_lambda)?;
    let z = z_bounds(x, prob, &op, params, c_lambda)?;
    let mut report = assemble_and_solve(&y, y_m, &z, params, prob.n())?;
    report.k_lemma = k_lemma;
    report.c_lambda = c_lambda;
    report.conditional = conditional;
    report.sharp_used = sharp_y || z.sharp_used;
    report.notes.extend(notes);

    if !report.success {
        return Err(Error::VerificationFailed(report.to_json()));
    }
    let radius = report.r_selected.expect("success implies a certified radius");
    let form = VerifiedFloquetForm {
        candidate: x.clone(),
        radius,
        s: params.s,
        tau: prob.tau,
        conditional,
    };
    Ok((form, report))
}

/// Verification of a candidate against a validated orbit: builds the
/// Jacobian coefficient sequence and marks the result conditional when the
/// orbit itself is only a numerical candidate.
pub fn verify(
    orbit: &crate::system::OrbitEnclosure,
    x: &FloquetCandidate,
    params: &VerifierParams,
) -> Result<(VerifiedFloquetForm, VerificationReport)> {
    let a_seq = orbit.jacobian_coeffs()?;
    let prob = GalerkinProblem::new(a_seq, params.m, params.s)?;
    verify_problem(x, &prob, params, !orbit.rigorous)
}

/// Non-rigorous a posteriori contraction check: sample points of the ball
/// at truncation `M` and verify `‖T(x)−x̄‖_s < r` in floating point.
pub fn contraction_sample(
    x: &FloquetCandidate,
    prob: &GalerkinProblem,
    op: &BlockOperator,
    radius: f64,
    s: f64,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let n = x.n;
    let nsq = n * n;
    let big_m = op.big_m;
    let mid = prob.midpoint();
    // xorshift-ish deterministic generator
    let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1);
    let mut unit = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        // x̄ + perturbation within the ball, truncated at M modes.
        let mut q = x.q.clone();
        let mut r_mat = x.r_mat.clone();
        let pad0 = radius * crate::sequence::weight_pow_neg_upper(0, s);
        for i in 0..n {
            for j in 0..n {
                r_mat[(i, j)] += pad0 * unit();
                q[0].0[(i, j)] += pad0 * unit();
            }
        }
        for (k, qk) in q.iter_mut().enumerate().skip(1) {
            let pad = radius * crate::sequence::weight_pow_neg_upper(k as i64, s);
            for i in 0..n {
                for j in 0..n {
                    qk.0[(i, j)] += pad * unit();
                    qk.1[(i, j)] += pad * unit();
                }
            }
        }
        for k in x.m..big_m {
            let pad = radius * crate::sequence::weight_pow_neg_upper(k as i64, s);
            let re = RealMat::from_fn(n, n, |_, _| pad * unit());
            let im = RealMat::from_fn(n, n, |_, _| pad * unit());
            q.push((re, im));
        }
        let xp = FloquetCandidate { n, m: big_m, tau: x.tau, r_mat, q };
        // T(x) − x̄ = (x − x̄) − A f(x) at truncation M.
        let f = crate::solver::f_eval_point(&xp, &mid);
        let af = op.apply_a(&f);
        let xbar = pad_packed(&x.pack(), nsq, x.m, big_m);
        let xv = xp.pack();
        let mut norm: f64 = 0.0;
        for k in 0..big_m {
            let w = crate::sequence::weight(k as i64).powf(s);
            for p in 0..2 * nsq {
                let idx = 2 * nsq * k + p;
                let t = xv[idx] - xbar[idx] - af[idx];
                norm = norm.max((t.abs()) * w);
            }
        }
        worst = worst.max(norm);
    }
    Ok(worst)
}

fn pad_packed(v: &[f64], nsq: usize, m: usize, big_m: usize) -> Vec<f64> {
    let mut out = v.to_vec();
    out.resize(2 * nsq * big_m.max(m), 0.0);
    out
}

/// Diagnostic: compare `Q(t) e^{R̄ t}` against direct integration of the
/// linear system at a handful of sample times. Returns the worst deviation.
pub fn fundamental_solution_defect(
    x: &FloquetCandidate,
    prob: &GalerkinProblem,
    samples: usize,
) -> Result<f64> {
    let n = x.n;
    let mid = prob.midpoint();
    let q_seq = x.q_sequence();
    let mut rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        // A(t) from midpoint coefficients.
        let mut a = mid.coeffs[0].0.clone();
        for k in (2..mid.coeffs.len()).step_by(2) {
            let ang = k as f64 * std::f64::consts::PI * t / mid.tau;
            let (c, s) = (ang.cos(), ang.sin());
            let (re, im) = &mid.coeffs[k];
            a = a.add(&re.scale(2.0 * c)).add(&im.scale(-2.0 * s));
        }
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for cc in 0..n {
                    acc += a[(i, cc)] * y[cc * n + j];
                }
                dy[i * n + j] = acc;
            }
        }
    };
    let y0: Vec<f64> = RealMat::identity(n).data().to_vec();
    let path = crate::ode::integrate_sampled(&mut rhs, 0.0, 2.0 * mid.tau, &y0, samples, 1e-10)?;
    let mut worst: f64 = 0.0;
    for (j, phi) in path.iter().enumerate() {
        let t = 2.0 * mid.tau * j as f64 / (samples - 1) as f64;
        let q_t = q_seq.eval_at(&Interval::point(t));
        let q_mid = RealMat::from_vec(n, n, q_t.midpoint());
        let e_rt = crate::linalg::matrix_exp(&x.r_mat.scale(t));
        let model = q_mid.mul(&e_rt);
        let direct = RealMat::from_vec(n, n, phi.clone());
        worst = worst.max(model.sub(&direct).max_abs());
    }
    Ok(worst)
}
