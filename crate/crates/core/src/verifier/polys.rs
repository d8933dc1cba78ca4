//! Radii polynomial assembly, root isolation and the final direct check.

use super::bounds::ZBounds;
use super::{MarginEntry, VerificationReport, VerifierParams};
use crate::interval::{pow_enclosure, Interval};
use crate::sequence::weight;
use crate::Result;

/// Upper cap for reported unbounded admissible radii.
pub const RADIUS_CAP: f64 = 1e9;

/// Inner (conservative) negativity interval of
/// `p(r) = c + (lin − w) r + quad r²` with `c, lin, quad ≥ 0` upper bounds
/// and `w > 0` a lower bound of the weight term. Returns `None` when no
/// radius can be certified.
pub fn negativity_interval(c: f64, lin: f64, quad: f64, w: f64) -> Option<(f64, f64)> {
    let b = Interval::point(lin).sub(&Interval::point(w));
    if b.hi() >= 0.0 {
        return None;
    }
    if quad == 0.0 {
        // c + b r < 0 for r > c / (−b).
        let lo = Interval::point(c).div(&b.neg()).ok()?.hi();
        return Some((lo, RADIUS_CAP));
    }
    let disc = b
        .square()
        .sub(&Interval::point(4.0).mul(&Interval::point(quad)).mul(&Interval::point(c)));
    if disc.lo() <= 0.0 {
        return None;
    }
    let sq = disc.sqrt().ok()?;
    let two_a = Interval::point(2.0 * quad);
    let r_lo = b.neg().sub(&sq).div(&two_a).ok()?.hi();
    let r_hi = b.neg().add(&sq).div(&two_a).ok()?.lo();
    (r_lo < r_hi).then_some((r_lo.max(0.0), r_hi.min(RADIUS_CAP)))
}

/// Upper bound of `p(r)` at a point radius.
fn poly_value_upper(c: f64, lin: f64, quad: f64, w_lo: f64, r: f64) -> f64 {
    let r_iv = Interval::point(r);
    Interval::point(c)
        .add(&Interval::point(lin).mul(&r_iv))
        .add(&Interval::point(quad).mul(&r_iv.square()))
        .sub(&Interval::point(w_lo).mul(&r_iv))
        .hi()
}

struct ScalarPoly {
    block: usize,
    entry: usize,
    c: f64,
    lin: f64,
    quad: f64,
    w_lo: f64,
}

/// Assemble all scalar radii polynomials, intersect their negativity
/// intervals and certify one radius by a direct interval re-check.
pub fn assemble_and_solve(
    y: &[Vec<f64>],
    y_m: f64,
    z: &ZBounds,
    params: &VerifierParams,
    n: usize,
) -> Result<VerificationReport> {
    let big_m = params.big_m;
    let s = params.s;
    let mut polys: Vec<ScalarPoly> = Vec::new();
    for (k, yk) in y.iter().enumerate() {
        let w_lo = pow_enclosure(&Interval::point(weight(k as i64)), -s)?.lo();
        for p in 0..yk.len() {
            polys.push(ScalarPoly {
                block: k,
                entry: p,
                c: yk[p],
                lin: z.z0[k][p] + z.z1[k][p],
                quad: z.z2[k][p],
                w_lo,
            });
        }
    }
    // Tail polynomial.
    let w_m_lo = pow_enclosure(&Interval::point(big_m as f64), -s)?.lo();
    polys.push(ScalarPoly {
        block: big_m,
        entry: 0,
        c: y_m,
        lin: z.z_m1,
        quad: z.z_m2,
        w_lo: w_m_lo,
    });

    let mut r_lo = 0.0f64;
    let mut r_hi = RADIUS_CAP;
    let mut feasible = true;
    let mut blocking = None;
    for poly in &polys {
        match negativity_interval(poly.c, poly.lin, poly.quad, poly.w_lo) {
            Some((lo, hi)) => {
                r_lo = r_lo.max(lo);
                r_hi = r_hi.min(hi);
                if r_lo >= r_hi {
                    feasible = false;
                    blocking = Some((poly.block, poly.entry));
                    break;
                }
            }
            None => {
                feasible = false;
                blocking = Some((poly.block, poly.entry));
                break;
            }
        }
    }

    let mut report = VerificationReport {
        s,
        m: params.m,
        big_m,
        l_policy: params.l_policy,
        sharp_used: z.sharp_used,
        k_lemma: 0,
        c_lambda: 0.0,
        r_interval: None,
        r_selected: None,
        success: false,
        conditional: false,
        margins: Vec::new(),
        notes: Vec::new(),
    };
    if z.defect_norm >= 1.0 {
        report.notes.push(format!(
            "approximate inverse not certified: defect norm {} >= 1",
            z.defect_norm
        ));
        feasible = false;
    }
    if !feasible {
        if let Some((blk, entry)) = blocking {
            report
                .notes
                .push(format!("no admissible radius; first blocking entry: block {blk}, entry {entry}"));
        }
        report.margins = worst_margins(&polys, f64::NAN, n);
        return Ok(report);
    }

    // Candidate radii inside the interval, sharpest first; re-check each
    // rigorously and keep the first that certifies.
    let candidates = [
        r_lo * (1.0 + 1e-9) + 1e-280,
        r_lo * (1.0 + 1e-6) + 1e-250,
        r_lo * (1.0 + 1e-3) + 1e-200,
        r_lo + (r_hi - r_lo) * 1e-4 + f64::MIN_POSITIVE,
        (r_lo.max(1e-300) * r_hi).sqrt(),
        0.5 * (r_lo + r_hi),
    ];
    let mut selected = None;
    for &r_sel in &candidates {
        if r_sel.is_nan() || r_sel <= 0.0 || r_sel <= r_lo || r_sel >= r_hi {
            continue;
        }
        let ok = polys
            .iter()
            .all(|p| poly_value_upper(p.c, p.lin, p.quad, p.w_lo, r_sel) < 0.0);
        if ok {
            selected = Some(r_sel);
            break;
        }
    }
    match selected {
        Some(r_sel) => {
            report.success = true;
            report.r_interval = Some((r_lo, r_hi));
            report.r_selected = Some(r_sel);
            report.margins = worst_margins(&polys, r_sel, n);
        }
        None => {
            report.notes.push(
                "negativity interval found but the direct re-check failed at every candidate radius"
                    .into(),
            );
            report.margins = worst_margins(&polys, 0.5 * (r_lo + r_hi), n);
        }
    }
    Ok(report)
}

fn worst_margins(polys: &[ScalarPoly], r_sel: f64, _n: usize) -> Vec<MarginEntry> {
    let mut by_block: Vec<MarginEntry> = Vec::new();
    for p in polys {
        let v = if r_sel.is_nan() {
            f64::NAN
        } else {
            poly_value_upper(p.c, p.lin, p.quad, p.w_lo, r_sel)
        };
        match by_block.iter_mut().find(|e| e.k == p.block) {
            Some(e) => {
                if v.is_nan() || v > e.value_at_rsel {
                    e.value_at_rsel = v;
                    e.worst_entry = p.entry;
                }
            }
            None => by_block.push(MarginEntry {
                k: p.block,
                worst_entry: p.entry,
                value_at_rsel: v,
            }),
        }
    }
    by_block
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_linear_slack_admits_everything() {
        // p(r) = −r/(2 w^s): every r > 0 works.
        let (lo, hi) = negativity_interval(0.0, 0.5 * 0.25, 0.0, 0.25).unwrap();
        assert!(lo <= 1e-300);
        assert_eq!(hi, RADIUS_CAP);
    }

    #[test]
    fn unit_residual_needs_radius_above_one() {
        // Y = w^{-s}, Z = 0: p(r) = w^{-s}(1 − r): r must exceed 1.
        let w = 0.25;
        let (lo, hi) = negativity_interval(w, 0.0, 0.0, w).unwrap();
        assert!(lo >= 1.0 && lo < 1.0 + 1e-12);
        assert_eq!(hi, RADIUS_CAP);
    }

    #[test]
    fn quadratic_roots_enclose() {
        // p(r) = 1e-6 − 0.5 r + r²: roots ≈ 2.0000080000480civ e-6 and ~0.499998.
        let out = negativity_interval(1e-6, 0.5, 1.0, 1.0).unwrap();
        let exact_lo = (0.5 - (0.25f64 - 4e-6).sqrt()) / 2.0;
        let exact_hi = (0.5 + (0.25f64 - 4e-6).sqrt()) / 2.0;
        assert!(out.0 >= exact_lo - 1e-18 && out.0 <= exact_lo + 1e-12);
        assert!(out.1 <= exact_hi + 1e-18 && out.1 >= exact_hi - 1e-12);
    }

    #[test]
    fn infeasible_when_slope_dominates() {
        assert!(negativity_interval(0.0, 1.0, 0.0, 0.25).is_none());
        assert!(negativity_interval(1.0, 0.0, 10.0, 0.1).is_none());
    }
}
