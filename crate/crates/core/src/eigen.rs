//! Verified eigenvalue/eigenvector enclosures of an interval matrix.
//!
//! Each eigenpair of the midpoint matrix seeds a Krawczyk operator for the
//! augmented real system
//!
//! ```text
//! (R − μI) v = 0,   |v|² = 1,   Im(v_p) = 0
//! ```
//!
//! where the phase pin `p` is the largest-modulus component of the seed
//! eigenvector. Strict contraction of the Krawczyk image certifies that
//! every matrix in the enclosure has exactly one eigenpair inside the box.

use crate::interval::{ComplexInterval, Interval, IntervalMatrix};
use crate::linalg::{schur, schur_eigenvector, schur_eigenvalues, CplxMat, RealMat};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A certified eigenpair enclosure.
#[derive(Debug, Clone)]
pub struct EigenPairEnclosure {
    pub mu: ComplexInterval,
    /// Eigenvector with `|v|² = 1` and the pinned component real.
    pub v: Vec<ComplexInterval>,
    pub kind: EigenKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EigenKind {
    Real,
    ComplexPairMember,
}

/// Stability label of one Floquet direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionLabel {
    Stable,
    Trivial,
    Unstable,
}

/// Eigenpairs labelled by the sign of their Lyapunov exponents.
#[derive(Debug, Clone)]
pub struct ExponentClassification {
    pub pairs: Vec<(EigenPairEnclosure, DirectionLabel)>,
    /// Enclosures of the Lyapunov exponents `l_j = Re(μ_j)`.
    pub lyapunov: Vec<Interval>,
}

/// Certified eigenpair enclosures, one per eigenvalue of the midpoint.
pub fn verified_eigenpairs(r: &IntervalMatrix) -> Result<Vec<EigenPairEnclosure>> {
    let n = r.rows();
    if !r.is_square() {
        return Err(Error::DimensionMismatch("eigen decomposition of non-square matrix".into()));
    }
    let mid = RealMat::from_vec(n, n, r.midpoint());
    let (u, t) = schur(&CplxMat::from_real(&mid))?;
    let eigs = schur_eigenvalues(&t);

    // Separation check on the midpoint spectrum.
    let scale = 1.0 + mid.max_abs();
    for i in 0..n {
        for j in 0..i {
            let d = (eigs[i] - eigs[j]).abs();
            if d < 1e-8 * scale {
                return Err(Error::DegenerateSpectrum(format!(
                    "midpoint eigenvalues {i} and {j} separated by only {d:.3e}"
                )));
            }
        }
    }

    // Eigenvector preconditioning: certify on B = X̄⁻¹ R X̄ where X̄ collects
    // the (real-form) midpoint eigenvectors. In that basis the eigenvectors
    // are near the canonical ones, so the contraction test survives wide
    // input enclosures that would drown the raw eigenvector sensitivity.
    let mut xbar = RealMat::zeros(n, n);
    // (column, eigenvalue, is_real); complex pairs occupy two columns.
    let mut seeds: Vec<(usize, crate::linalg::Cplx, bool)> = Vec::new();
    let mut col = 0usize;
    let mut used: Vec<usize> = Vec::new();
    for idx in 0..n {
        if used.contains(&idx) {
            continue;
        }
        let lam = eigs[idx];
        let mut v = schur_eigenvector(&u, &t, idx);
        let p = (0..n)
            .max_by(|&a, &b| v[a].abs().partial_cmp(&v[b].abs()).unwrap())
            .unwrap();
        let phase = v[p] / crate::linalg::Cplx::new(v[p].abs(), 0.0);
        for z in &mut v {
            *z = *z / phase;
        }
        let is_real = lam.im.abs() < 1e-9 * scale;
        if is_real {
            for i in 0..n {
                xbar[(i, col)] = v[i].re;
            }
            seeds.push((col, crate::linalg::Cplx::new(lam.re, 0.0), true));
            col += 1;
        } else {
            // Use the member with positive imaginary part.
            let lam = if lam.im > 0.0 { lam } else { lam.conj() };
            let vv: Vec<crate::linalg::Cplx> = if eigs[idx].im > 0.0 {
                v.clone()
            } else {
                v.iter().map(|z| z.conj()).collect()
            };
            for i in 0..n {
                xbar[(i, col)] = vv[i].re;
                xbar[(i, col + 1)] = vv[i].im;
            }
            if let Some(j) = (0..n).find(|&j| {
                j != idx && !used.contains(&j) && (eigs[j] - eigs[idx].conj()).abs() < 1e-6 * scale
            }) {
                used.push(j);
            }
            seeds.push((col, lam, false));
            col += 2;
        }
    }
    if col != n {
        return Err(Error::NotCertified("eigenvector basis incomplete".into()));
    }

    // Rigorous enclosure of X̄⁻¹ and of B.
    let xbar_iv = IntervalMatrix::from_fn(n, n, |i, j| Interval::point(xbar[(i, j)]));
    let xinv = crate::solver::lambda_k_inverse(&xbar_iv)
        .map_err(|_| Error::DegenerateSpectrum("eigenvector basis not certifiably invertible".into()))?;
    let b_iv = xinv.enclosure.try_mul(r)?.try_mul(&xbar_iv)?;

    let all_real = seeds.iter().all(|(_, _, is_real)| *is_real);

    let mut out = Vec::with_capacity(n);
    for (c, lam, is_real) in seeds {
        let mut y0 = vec![crate::linalg::Cplx::ZERO; n];
        if is_real {
            y0[c] = crate::linalg::Cplx::ONE;
        } else {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            y0[c] = crate::linalg::Cplx::new(h, 0.0);
            y0[c + 1] = crate::linalg::Cplx::new(0.0, h);
        }
        let pair_b = match certify_pair(&b_iv, lam, &y0, c, is_real) {
            Ok(p) => p,
            Err(e) if is_real && all_real => {
                // Wide-enclosure fallback: eliminate the eigenvalue row and
                // run a Brouwer box test on the remaining components.
                elimination_pair(&b_iv, c).map_err(|_| e)?
            }
            Err(e) => return Err(e),
        };
        let pair = map_back(&xbar, r, pair_b, is_real)?;
        if is_real {
            out.push(pair);
        } else {
            let conj = EigenPairEnclosure {
                mu: pair.mu.conj(),
                v: pair.v.iter().map(|z| z.conj()).collect(),
                kind: EigenKind::ComplexPairMember,
            };
            out.push(pair);
            out.push(conj);
        }
    }
    if out.len() != n {
        return Err(Error::NotCertified(format!(
            "expected {n} eigenpairs, certified {}",
            out.len()
        )));
    }
    Ok(out)
}

/// Eigenpair of a near-diagonal interval matrix by diagonal elimination:
/// with `y = e_j + δ`, `δ_j = 0`, the eigenvalue row gives
/// `μ = B_jj + Σ_{k≠j} B_jk δ_k` and the remaining rows the fixed point
/// `δ_i = −(B_ij + Σ_{k≠i,j} B_ik δ_k) / (B_ii − μ)`. A box mapped strictly
/// into itself proves existence (Brouwer); pairwise disjoint Gershgorin
/// discs pin exactly one eigenvalue per box.
fn elimination_pair(b: &IntervalMatrix, j: usize) -> Result<EigenPairEnclosure> {
    let n = b.rows();
    // Disjoint Gershgorin discs certify the one-eigenvalue count.
    let disc = |i: usize| -> (f64, f64) {
        let mut rad = 0.0f64;
        for k in 0..n {
            if k != i {
                rad += b[(i, k)].mag();
            }
        }
        (b[(i, i)].mid(), rad + b[(i, i)].rad())
    };
    for p in 0..n {
        for q in 0..p {
            let (cp, rp) = disc(p);
            let (cq, rq) = disc(q);
            // Distance computed as a rigorous lower bound.
            let dist = Interval::point(cp).sub(&Interval::point(cq)).abs().lo();
            let radsum = crate::interval::up(rp + rq);
            if dist <= radsum {
                return Err(Error::NotCertified(format!(
                    "Gershgorin discs {p} and {q} overlap"
                )));
            }
        }
    }

    // Fixed point iteration with epsilon inflation.
    let mu_of = |delta: &[Interval]| -> Interval {
        let mut mu = b[(j, j)];
        for (k, d) in delta.iter().enumerate() {
            if k != j {
                mu = mu.add(&b[(j, k)].mul(d));
            }
        }
        mu
    };
    let image = |delta: &[Interval]| -> Result<Vec<Interval>> {
        let mu = mu_of(delta);
        let mut out = vec![Interval::ZERO; n];
        for i in 0..n {
            if i == j {
                continue;
            }
            let mut num = b[(i, j)];
            for (k, d) in delta.iter().enumerate() {
                if k != i && k != j {
                    num = num.add(&b[(i, k)].mul(d));
                }
            }
            let den = b[(i, i)].sub(&mu);
            out[i] = num.neg().div(&den)?;
        }
        Ok(out)
    };

    let mut delta = vec![Interval::ZERO; n];
    for _ in 0..4 {
        let img = image(&delta)?;
        // Inflate the image slightly and test self-mapping.
        let cand: Vec<Interval> = img
            .iter()
            .map(|iv| {
                let r = 1.3 * iv.rad() + 1e-14;
                Interval::with_radius(iv.mid(), r)
            })
            .collect();
        let img2 = image(&cand)?;
        let contained = (0..n)
            .all(|i| i == j || (cand[i].lo() < img2[i].lo() && img2[i].hi() < cand[i].hi()));
        if contained {
            let mut tight = img2;
            tight[j] = Interval::ZERO;
            let mu = mu_of(&tight);
            let v: Vec<ComplexInterval> = (0..n)
                .map(|i| {
                    if i == j {
                        ComplexInterval::real(Interval::ONE)
                    } else {
                        ComplexInterval::real(tight[i])
                    }
                })
                .collect();
            return Ok(EigenPairEnclosure {
                mu: ComplexInterval::real(mu),
                v,
                kind: EigenKind::Real,
            });
        }
        delta = cand;
    }
    Err(Error::NotCertified(format!(
        "elimination fixed point did not close for eigenvalue column {j}"
    )))
}

/// Map an eigenpair of `B = X̄⁻¹ R X̄` back to an eigenpair of `R`:
/// `v = X̄ y`, renormalized to unit modulus.
fn map_back(
    xbar: &RealMat,
    _r: &IntervalMatrix,
    pair_b: EigenPairEnclosure,
    is_real: bool,
) -> Result<EigenPairEnclosure> {
    let n = xbar.rows();
    let mut v = vec![ComplexInterval::ZERO; n];
    for (i, vi) in v.iter_mut().enumerate() {
        let mut re = Interval::ZERO;
        let mut im = Interval::ZERO;
        for c in 0..n {
            let x = xbar[(i, c)];
            if x != 0.0 {
                re = re.add(&pair_b.v[c].re.scale(x));
                im = im.add(&pair_b.v[c].im.scale(x));
            }
        }
        *vi = ComplexInterval::new(re, im);
    }
    let mut norm2 = Interval::ZERO;
    for z in &v {
        norm2 = norm2.add(&z.norm_sq());
    }
    if norm2.lo() <= 0.0 {
        return Err(Error::NotCertified("mapped eigenvector may vanish".into()));
    }
    let inv_norm = norm2.sqrt()?.recip()?;
    let v: Vec<ComplexInterval> = v
        .into_iter()
        .map(|z| ComplexInterval::new(z.re.mul(&inv_norm), z.im.mul(&inv_norm)))
        .collect();
    Ok(EigenPairEnclosure {
        mu: pair_b.mu,
        v,
        kind: if is_real { EigenKind::Real } else { EigenKind::ComplexPairMember },
    })
}

/// Krawczyk certification of one eigenpair.
fn certify_pair(
    r: &IntervalMatrix,
    lam: crate::linalg::Cplx,
    v: &[crate::linalg::Cplx],
    pin: usize,
    is_real: bool,
) -> Result<EigenPairEnclosure> {
    let n = r.rows();
    let dim = 2 * n + 2;

    // Seed z0 = (v_re, v_im, mu_re, mu_im).
    let mut z0 = vec![0.0; dim];
    for i in 0..n {
        z0[i] = v[i].re;
        z0[n + i] = if is_real { 0.0 } else { v[i].im };
    }
    z0[2 * n] = lam.re;
    z0[2 * n + 1] = if is_real { 0.0 } else { lam.im };

    // Midpoint derivative and its inverse.
    let r_mid = RealMat::from_vec(n, n, r.midpoint());
    let df_mid = jacobian_point(&r_mid, &z0, pin);
    let c = df_mid
        .inverse()
        .map_err(|_| Error::NotCertified("singular midpoint derivative".into()))?;

    // Residual step C·F(z0) as intervals.
    let f0 = residual_interval(r, &z0, pin);
    let step = mul_real_interval_vec(&c, &f0);
    let base: f64 = step.iter().map(|iv| iv.mag()).fold(0.0, f64::max);

    for &factor in &[1.1, 1.3, 1.7, 2.5, 4.0, 8.0, 32.0, 256.0, 4096.0, 1e6, 1e8] {
        if !(base * factor).is_finite() {
            break;
        }
        // Component-wise inflation: each slot grows proportionally to its own
        // first-order spread, floored to keep the box full dimensional.
        let floor = (base * factor * 1e-3).max(1e-15 * factor);
        let z_box: Vec<Interval> = z0
            .iter()
            .zip(&step)
            .map(|(&c0, st)| Interval::with_radius(c0, (st.mag() * factor).max(floor)))
            .collect();
        let df_box = jacobian_interval_mat(r, &z_box, pin);
        // K = z0 − C F(z0) + (I − C DF(Z)) (Z − z0)
        let cdf = df_box.mul_real_left(&c)?;
        let i_cdf = IntervalMatrix::identity(dim).try_sub(&cdf)?;
        let mut k_img = vec![Interval::ZERO; dim];
        for i in 0..dim {
            let mut acc = Interval::point(z0[i]).sub(&step[i]);
            for j in 0..dim {
                let spread = z_box[j].sub(&Interval::point(z0[j]));
                acc = acc.add(&i_cdf[(i, j)].mul(&spread));
            }
            k_img[i] = acc;
        }
        let contained = k_img
            .iter()
            .zip(&z_box)
            .all(|(k, z)| z.lo() < k.lo() && k.hi() < z.hi());
        if contained {
            let tight: Vec<Interval> = k_img
                .iter()
                .zip(&z_box)
                .map(|(k, z)| k.intersection(z).unwrap_or(*k))
                .collect();
            let v_out: Vec<ComplexInterval> = (0..n)
                .map(|i| ComplexInterval::new(tight[i], tight[n + i]))
                .collect();
            let mu = ComplexInterval::new(tight[2 * n], tight[2 * n + 1]);
            return Ok(EigenPairEnclosure {
                mu,
                v: v_out,
                kind: if is_real { EigenKind::Real } else { EigenKind::ComplexPairMember },
            });
        }
    }
    Err(Error::NotCertified(format!(
        "Krawczyk contraction failed near eigenvalue ({}, {})",
        lam.re, lam.im
    )))
}

/// F(z) with interval coefficients, z a point.
fn residual_interval(r: &IntervalMatrix, z: &[f64], pin: usize) -> Vec<Interval> {
    let n = r.rows();
    let dim = 2 * n + 2;
    let (mu_re, mu_im) = (z[2 * n], z[2 * n + 1]);
    let mut out = vec![Interval::ZERO; dim];
    for i in 0..n {
        let mut acc_re = Interval::ZERO;
        let mut acc_im = Interval::ZERO;
        for j in 0..n {
            acc_re = acc_re.add(&r[(i, j)].scale(z[j]));
            acc_im = acc_im.add(&r[(i, j)].scale(z[n + j]));
        }
        // − μ v (exact point products, widened outward)
        acc_re = acc_re.sub(&Interval::point(mu_re).mul(&Interval::point(z[i])))
            .add(&Interval::point(mu_im).mul(&Interval::point(z[n + i])));
        acc_im = acc_im.sub(&Interval::point(mu_re).mul(&Interval::point(z[n + i])))
            .sub(&Interval::point(mu_im).mul(&Interval::point(z[i])));
        out[i] = acc_re;
        out[n + i] = acc_im;
    }
    let mut norm = Interval::point(-1.0);
    for i in 0..2 * n {
        norm = norm.add(&Interval::point(z[i]).square());
    }
    out[2 * n] = norm;
    out[2 * n + 1] = Interval::point(z[n + pin]);
    out
}

fn jacobian_point(r: &RealMat, z: &[f64], pin: usize) -> RealMat {
    let n = r.rows();
    let dim = 2 * n + 2;
    let (mu_re, mu_im) = (z[2 * n], z[2 * n + 1]);
    let mut j = RealMat::zeros(dim, dim);
    for i in 0..n {
        for col in 0..n {
            j[(i, col)] = r[(i, col)] - if i == col { mu_re } else { 0.0 };
            j[(n + i, n + col)] = r[(i, col)] - if i == col { mu_re } else { 0.0 };
        }
        j[(i, n + i)] = mu_im;
        j[(n + i, i)] = -mu_im;
        j[(i, 2 * n)] = -z[i];
        j[(i, 2 * n + 1)] = z[n + i];
        j[(n + i, 2 * n)] = -z[n + i];
        j[(n + i, 2 * n + 1)] = -z[i];
    }
    for i in 0..2 * n {
        j[(2 * n, i)] = 2.0 * z[i];
    }
    j[(2 * n + 1, n + pin)] = 1.0;
    j
}

fn jacobian_interval_mat(r: &IntervalMatrix, z: &[Interval], pin: usize) -> IntervalMatrix {
    let n = r.rows();
    let dim = 2 * n + 2;
    let mu_re = z[2 * n];
    let mu_im = z[2 * n + 1];
    let mut j = IntervalMatrix::zeros(dim, dim);
    for i in 0..n {
        for col in 0..n {
            j[(i, col)] = r[(i, col)].sub(&if i == col { mu_re } else { Interval::ZERO });
            j[(n + i, n + col)] = r[(i, col)].sub(&if i == col { mu_re } else { Interval::ZERO });
        }
        j[(i, n + i)] = j[(i, n + i)].add(&mu_im);
        j[(n + i, i)] = j[(n + i, i)].sub(&mu_im);
        j[(i, 2 * n)] = z[i].neg();
        j[(i, 2 * n + 1)] = z[n + i];
        j[(n + i, 2 * n)] = z[n + i].neg();
        j[(n + i, 2 * n + 1)] = z[i].neg();
    }
    for i in 0..2 * n {
        j[(2 * n, i)] = z[i].scale(2.0);
    }
    j[(2 * n + 1, n + pin)] = Interval::ONE;
    j
}

fn mul_real_interval_vec(a: &RealMat, v: &[Interval]) -> Vec<Interval> {
    (0..a.rows())
        .map(|i| {
            let mut acc = Interval::ZERO;
            for (j, iv) in v.iter().enumerate() {
                let c = a[(i, j)];
                if c != 0.0 {
                    acc = acc.add(&iv.scale(c));
                }
            }
            acc
        })
        .collect()
}

/// Label eigenpairs by the sign of their Lyapunov exponents. Exactly one
/// exponent interval must meet the trivial band `[-tol, tol]`.
pub fn classify(
    pairs: Vec<EigenPairEnclosure>,
    trivial_tol: f64,
) -> Result<ExponentClassification> {
    let lyapunov: Vec<Interval> = pairs.iter().map(|p| p.mu.re).collect();
    let band = Interval::symmetric(trivial_tol);
    let candidates: Vec<usize> = lyapunov
        .iter()
        .enumerate()
        .filter(|(_, l)| l.intersects(&band))
        .map(|(i, _)| i)
        .collect();
    if candidates.len() != 1 {
        return Err(Error::AmbiguousTrivial(format!(
            "{} exponent enclosures intersect the trivial band ±{trivial_tol}",
            candidates.len()
        )));
    }
    let trivial_idx = candidates[0];
    let mut out = Vec::with_capacity(pairs.len());
    for (i, p) in pairs.into_iter().enumerate() {
        let label = if i == trivial_idx {
            DirectionLabel::Trivial
        } else if lyapunov[i].hi() < 0.0 {
            DirectionLabel::Stable
        } else if lyapunov[i].lo() > 0.0 {
            DirectionLabel::Unstable
        } else {
            return Err(Error::AmbiguousTrivial(format!(
                "exponent {i} has undetermined sign {}",
                lyapunov[i]
            )));
        };
        out.push((p, label));
    }
    Ok(ExponentClassification { pairs: out, lyapunov })
}

/// Default trivial tolerance: `1e-6 · max(1, ‖R‖_∞)`.
pub fn default_trivial_tol(r: &IntervalMatrix) -> f64 {
    1e-6 * r.rowsum_norm().max(1.0)
}
