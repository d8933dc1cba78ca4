//! Stable/unstable tangent bundles of a periodic orbit from a verified
//! normal form: direction frames `w_jᶿ = Q(θ)v_j`, multiplier moduli
//! `|σ_j| = e^{l_j τ}` and the non-rigorous sign/orientability recovery.

use crate::eigen::{DirectionLabel, EigenKind, EigenPairEnclosure, ExponentClassification};
use crate::interval::{exp_enclosure, ComplexInterval, Interval};
use crate::linalg::{matrix_exp, RealMat};
use crate::system::OrbitEnclosure;
use crate::verifier::VerifiedFloquetForm;
use crate::{Error, Result};

/// Directions of the tangent bundles at one phase θ.
#[derive(Debug, Clone)]
pub struct BundleSample {
    pub theta: f64,
    pub base_point: Vec<Interval>,
    pub directions: Vec<(DirectionLabel, Vec<ComplexInterval>)>,
}

/// Orientability verdict of one bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    Orientable,
    NonOrientable,
    Undetermined,
}

/// Sampled bundles plus multiplier data.
#[derive(Debug, Clone)]
pub struct BundleEnclosure {
    pub samples: Vec<BundleSample>,
    /// `(label, |σ_j| enclosure)` per eigenpair, in classification order.
    pub multipliers: Vec<(DirectionLabel, Interval)>,
    /// Orientation verdict per nontrivial direction (non-rigorous).
    pub orientation: Vec<(DirectionLabel, Orientation)>,
}

/// Enclosure of the bundle directions at phase θ.
pub fn bundle_at(
    theta: f64,
    form: &VerifiedFloquetForm,
    orbit: &OrbitEnclosure,
    classification: &ExponentClassification,
) -> Result<BundleSample> {
    let q_seq = form.q_enclosure();
    let q_theta = q_seq.eval_at(&Interval::point(theta));
    let n = form.candidate.n;
    let base_point = orbit.gamma_at(&Interval::point(theta))?;
    let mut directions = Vec::new();
    for (pair, label) in &classification.pairs {
        let mut w = vec![ComplexInterval::ZERO; n];
        for (i, wi) in w.iter_mut().enumerate() {
            let mut acc = ComplexInterval::ZERO;
            for c in 0..n {
                let q = q_theta[(i, c)];
                acc = acc.add(&ComplexInterval::new(
                    q.mul(&pair.v[c].re),
                    q.mul(&pair.v[c].im),
                ));
            }
            *wi = acc;
        }
        directions.push((*label, w));
    }
    Ok(BundleSample { theta, base_point, directions })
}

/// Rigorous multiplier moduli `|σ_j| = e^{l_j τ}`.
pub fn multipliers(
    classification: &ExponentClassification,
    tau: &Interval,
) -> Vec<(DirectionLabel, Interval)> {
    classification
        .pairs
        .iter()
        .zip(&classification.lyapunov)
        .map(|((_, label), l)| (*label, exp_enclosure(&l.mul(tau))))
        .collect()
}

/// Non-rigorous multiplier sign of a real eigenpair: the component-wise
/// ratio of `Φ̄·(Q̄(τ)v̄)` to `Q̄(τ)v̄` with `Φ̄ = Q̄(τ)e^{R̄τ̄}` on midpoints.
/// Returns `(sign, ratio)`.
pub fn multiplier_sign(
    form: &VerifiedFloquetForm,
    orbit: &OrbitEnclosure,
    pair: &EigenPairEnclosure,
) -> Result<(i32, f64)> {
    if pair.kind != EigenKind::Real {
        return Err(Error::InconsistentRatios(
            "sign recovery needs a real eigenpair".into(),
        ));
    }
    let n = form.candidate.n;
    let tau = orbit.tau.mid();
    let q_seq = form.candidate.q_sequence();
    let q_tau = RealMat::from_vec(n, n, q_seq.eval_at(&Interval::point(tau)).midpoint());
    let phi = q_tau.mul(&matrix_exp(&form.candidate.r_mat.scale(tau)));
    let v_mid: Vec<f64> = pair.v.iter().map(|z| z.re.mid()).collect();
    let u = q_tau.mul_vec(&v_mid);
    let w = phi.mul_vec(&u);
    let u_scale = u.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let mut ratios = Vec::new();
    for i in 0..n {
        if u[i].abs() > 0.05 * u_scale {
            ratios.push(w[i] / u[i]);
        }
    }
    if ratios.is_empty() {
        return Err(Error::InconsistentRatios("no usable components".into()));
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    for r in &ratios {
        if (r - mean).abs() > 1e-3 * mean.abs().max(1e-12) {
            return Err(Error::InconsistentRatios(format!(
                "component ratios {ratios:?} disagree"
            )));
        }
    }
    Ok((if mean < 0.0 { -1 } else { 1 }, mean))
}

/// Sample the bundles over a uniform θ grid and derive orientation verdicts.
pub fn sample_bundles(
    form: &VerifiedFloquetForm,
    orbit: &OrbitEnclosure,
    classification: &ExponentClassification,
    count: usize,
) -> Result<BundleEnclosure> {
    if count < 2 {
        return Err(Error::DomainError(format!("grid count {count} < 2")));
    }
    let tau = orbit.tau.mid();
    let mut samples = Vec::with_capacity(count);
    for i in 0..count {
        let theta = tau * i as f64 / (count - 1) as f64;
        samples.push(bundle_at(theta, form, orbit, classification)?);
    }
    let mult = multipliers(classification, &form.tau);
    let mut orientation = Vec::new();
    for (pair, label) in &classification.pairs {
        if *label == DirectionLabel::Trivial {
            continue;
        }
        let verdict = if pair.kind == EigenKind::Real {
            match multiplier_sign(form, orbit, pair) {
                Ok((-1, _)) => Orientation::NonOrientable,
                Ok((_, _)) => Orientation::Orientable,
                Err(_) => Orientation::Undetermined,
            }
        } else {
            Orientation::Undetermined
        };
        orientation.push((*label, verdict));
    }
    Ok(BundleEnclosure { samples, multipliers: mult, orientation })
}

/// Bundle CSV: `theta, base_1..base_n`, then per direction j and component
/// k the real-part enclosure columns `wj_k_lo, wj_k_hi`.
pub fn write_bundle_csv(bundle: &BundleEnclosure, out: &mut impl std::io::Write) -> Result<()> {
    let Some(first) = bundle.samples.first() else {
        return Ok(());
    };
    let n = first.base_point.len();
    let mut header = vec!["theta".to_string()];
    for i in 1..=n {
        header.push(format!("base_{i}"));
    }
    for (j, _) in first.directions.iter().enumerate() {
        for k in 1..=n {
            header.push(format!("w{}_{}_lo", j + 1, k));
            header.push(format!("w{}_{}_hi", j + 1, k));
        }
    }
    writeln!(out, "{}", header.join(","))?;
    for s in &bundle.samples {
        let mut row = vec![format!("{}", s.theta)];
        for b in &s.base_point {
            row.push(format!("{}", b.mid()));
        }
        for (_, w) in &s.directions {
            for z in w {
                row.push(format!("{}", z.re.lo()));
                row.push(format!("{}", z.re.hi()));
            }
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// JSON eigen/multiplier summary per direction:
/// `{mu: {re, im}, v: [{re, im}], label, lyapunov, ...}`.
#[derive(Debug, serde::Serialize)]
pub struct EigenReportRow {
    pub mu: ComplexInterval,
    pub v: Vec<ComplexInterval>,
    pub label: DirectionLabel,
    pub lyapunov: Interval,
    pub multiplier_modulus: Interval,
    pub orientation: Option<Orientation>,
    pub multiplier_sign: Option<i32>,
    pub signed_ratio: Option<f64>,
}

/// Assemble the JSON report rows for the eigen summary.
pub fn eigen_report(
    form: &VerifiedFloquetForm,
    orbit: &OrbitEnclosure,
    classification: &ExponentClassification,
    bundle: &BundleEnclosure,
) -> Vec<EigenReportRow> {
    classification
        .pairs
        .iter()
        .zip(&classification.lyapunov)
        .zip(&bundle.multipliers)
        .map(|(((pair, label), l), (_, modulus))| {
            let (sign, ratio) = if pair.kind == EigenKind::Real && *label != DirectionLabel::Trivial
            {
                match multiplier_sign(form, orbit, pair) {
                    Ok((s, r)) => (Some(s), Some(r)),
                    Err(_) => (None, None),
                }
            } else {
                (None, None)
            };
            let orientation = bundle
                .orientation
                .iter()
                .find(|(lab, _)| lab == label)
                .map(|(_, o)| *o);
            EigenReportRow {
                mu: pair.mu,
                v: pair.v.clone(),
                label: *label,
                lyapunov: *l,
                multiplier_modulus: *modulus,
                orientation,
                multiplier_sign: sign,
                signed_ratio: ratio,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplier_of_zero_exponent_is_one() {
        let l = Interval::point(0.0);
        let m = exp_enclosure(&l.mul(&Interval::point(5.0)));
        assert!(m.contains(1.0) && m.width() < 1e-12);
    }

    #[test]
    fn multiplier_log_identity() {
        // l = -1, τ = ln 2 → |σ| = 1/2.
        let l = Interval::point(-1.0);
        let tau = Interval::point(std::f64::consts::LN_2);
        let m = exp_enclosure(&l.mul(&tau));
        assert!(m.contains(0.5));
        assert!(m.width() < 1e-14);
    }
}
