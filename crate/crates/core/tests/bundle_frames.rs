//! Bundle frame construction against a synthetic verified form, plus the
//! fixture-level checks of the orbit file interface.

use floquet_core::bundle::{bundle_at, multipliers, sample_bundles};
use floquet_core::eigen::{classify, verified_eigenpairs};
use floquet_core::interval::{ComplexInterval, Interval};
use floquet_core::linalg::RealMat;
use floquet_core::sequence::MatrixFourierSeq;
use floquet_core::solver::FloquetCandidate;
use floquet_core::system::{OrbitEnclosure, VectorFieldSpec};
use floquet_core::verifier::VerifiedFloquetForm;
use std::path::{Path, PathBuf};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

/// A hand-built verified form: R = diag(-1, 1e-9, 1), Q(0) = I with one
/// oscillating harmonic, proven radius 1e-10 (synthetic, for frame math).
fn synthetic_form() -> (VerifiedFloquetForm, OrbitEnclosure) {
    let n = 3;
    let tau = 0.8;
    let r_mat = RealMat::from_rows(&[
        vec![-1.0, 0.0, 0.0],
        vec![0.0, 1e-9, 0.0],
        vec![0.0, 0.0, 1.0],
    ]);
    let c = RealMat::from_fn(n, n, |i, j| if i == j { 0.05 } else { 0.01 * (i as f64 - j as f64) });
    let q0 = RealMat::identity(n).sub(&c.scale(2.0));
    let q = vec![
        (q0, RealMat::zeros(n, n)),
        (c, RealMat::from_fn(n, n, |i, j| 0.02 * ((i + j) as f64))),
    ];
    let candidate = FloquetCandidate { n, m: 2, tau, r_mat, q };
    let form = VerifiedFloquetForm {
        candidate,
        radius: 1e-10,
        s: 2.0,
        tau: Interval::point(tau),
        conditional: true,
    };
    let orbit = OrbitEnclosure {
        field: VectorFieldSpec::lorenz(10.0, 20.0, 8.0 / 3.0),
        tau: Interval::point(tau),
        s_star: 2.0,
        m_gamma: 0,
        xi: vec![vec![
            ComplexInterval::real(Interval::point(1.0)),
            ComplexInterval::real(Interval::point(2.0)),
            ComplexInterval::real(Interval::point(3.0)),
        ]],
        r_gamma: 0.0,
        rigorous: false,
    };
    (form, orbit)
}

#[test]
fn frame_at_zero_is_the_eigenvector() {
    let (form, orbit) = synthetic_form();
    let pairs = verified_eigenpairs(&form.r_enclosure()).unwrap();
    let cls = classify(pairs, 1e-6).unwrap();
    let sample = bundle_at(0.0, &form, &orbit, &cls).unwrap();
    // Q(0) = I within the ball, so w_j(0) must enclose v_j.
    for ((pair, _), (_, w)) in cls.pairs.iter().zip(&sample.directions) {
        for i in 0..3 {
            let vr = pair.v[i].re.mid();
            let vi = pair.v[i].im.mid();
            assert!(
                w[i].re.contains(vr) || (w[i].re.mid() - vr).abs() < 1e-7,
                "w(0)[{i}] = {:?} far from v[{i}] = {vr}",
                w[i].re
            );
            assert!(w[i].im.contains(vi) || (w[i].im.mid() - vi).abs() < 1e-7);
        }
    }
}

#[test]
fn frames_are_two_tau_periodic() {
    let (form, orbit) = synthetic_form();
    let pairs = verified_eigenpairs(&form.r_enclosure()).unwrap();
    let cls = classify(pairs, 1e-6).unwrap();
    let tau = orbit.tau.mid();
    let a = bundle_at(0.37, &form, &orbit, &cls).unwrap();
    let b = bundle_at(0.37 + 2.0 * tau, &form, &orbit, &cls).unwrap();
    for (da, db) in a.directions.iter().zip(&b.directions) {
        for i in 0..3 {
            assert!(
                (da.1[i].re.mid() - db.1[i].re.mid()).abs() < 1e-9,
                "2τ periodicity broken"
            );
        }
    }
}

#[test]
fn trivial_multiplier_contains_one_and_grid_endpoints() {
    let (form, orbit) = synthetic_form();
    let pairs = verified_eigenpairs(&form.r_enclosure()).unwrap();
    let cls = classify(pairs, 1e-6).unwrap();
    let mult = multipliers(&cls, &form.tau);
    let trivial = mult
        .iter()
        .find(|(l, _)| *l == floquet_core::eigen::DirectionLabel::Trivial)
        .expect("has trivial direction");
    // |σ_trivial| = e^{l τ} with l ≈ 1e-9: the interval must contain
    // e^{1e-9·τ} ≈ 1 + 8e-10 and sits within ±1e-6 of 1.
    assert!(trivial.1.lo() < 1.0 + 1e-6 && trivial.1.hi() > 1.0 - 1e-6);

    let bundle = sample_bundles(&form, &orbit, &cls, 2).unwrap();
    assert_eq!(bundle.samples.len(), 2);
    assert_eq!(bundle.samples[0].theta, 0.0);
    assert!((bundle.samples[1].theta - orbit.tau.mid()).abs() < 1e-15);
}

#[test]
fn adjacent_grid_samples_vary_continuously() {
    let (form, orbit) = synthetic_form();
    let pairs = verified_eigenpairs(&form.r_enclosure()).unwrap();
    let cls = classify(pairs, 1e-6).unwrap();
    let bundle = sample_bundles(&form, &orbit, &cls, 64).unwrap();
    for w in bundle.samples.windows(2) {
        for (da, db) in w[0].directions.iter().zip(&w[1].directions) {
            for i in 0..3 {
                let step = (da.1[i].re.mid() - db.1[i].re.mid()).abs();
                assert!(step < 0.1, "direction jumped by {step} between samples");
            }
        }
    }
}

#[test]
fn frames_are_monodromy_eigenvectors() {
    // Independent oracle: integrating the linearized flow over one period
    // from γ(θ) and applying it to the frame midpoint must scale the frame
    // by the multiplier, for a spread of phases.
    use floquet_core::solver::{init_guess, newton_refine, problem_from_orbit};

    let orbit =
        floquet_core::system::builtin::lorenz_sol4_orbit(1e-9);
    let m = 60;
    let prob = problem_from_orbit(&orbit, m, 2.0).unwrap();
    let x0 = init_guess(&orbit, m).unwrap();
    let x = newton_refine(&x0, &prob, 1e-12, 40).unwrap();
    let params = floquet_core::verifier::VerifierParams::new(2.0, m, 66);
    let (form, _) = floquet_core::verifier::verify_problem(&x, &prob, &params, true).unwrap();
    let pairs = verified_eigenpairs(&form.r_enclosure()).unwrap();
    let cls = classify(pairs, floquet_core::eigen::default_trivial_tol(&form.r_enclosure()))
        .unwrap();
    let mult = multipliers(&cls, &form.tau);

    let quad = orbit.field.quadratic_form().unwrap();
    let tau = orbit.tau.mid();
    for g in 0..10 {
        let theta = tau * (0.05 + 0.09 * g as f64);
        let sample = bundle_at(theta, &form, &orbit, &cls).unwrap();
        // Monodromy from γ(θ) over one period.
        let mut rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
            let a = quad.jacobian_at(&orbit.gamma_mid_at(theta + t));
            for i in 0..3 {
                for j in 0..3 {
                    let mut acc = 0.0;
                    for c in 0..3 {
                        acc += a[(i, c)] * y[c * 3 + j];
                    }
                    dy[i * 3 + j] = acc;
                }
            }
        };
        let eye: Vec<f64> = RealMat::identity(3).data().to_vec();
        let phi =
            RealMat::from_vec(3, 3, floquet_core::ode::integrate(&mut rhs, 0.0, tau, &eye, 1e-12).unwrap());
        for (((_, w), (_, sigma)), (pair, label)) in
            sample.directions.iter().zip(&mult).zip(&cls.pairs)
        {
            let _ = pair;
            let w_mid: Vec<f64> = w.iter().map(|z| z.re.mid()).collect();
            let norm = w_mid.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < 1e-9 {
                continue;
            }
            let phi_w = phi.mul_vec(&w_mid);
            // |Φ_θ(τ) w| = |σ| |w| and the direction is preserved up to sign.
            let phi_norm = phi_w.iter().map(|v| v * v).sum::<f64>().sqrt();
            let scale = phi_norm / norm;
            assert!(
                (scale - sigma.mid()).abs() < 2e-4 * sigma.mid().max(1.0),
                "θ={theta:.3}, {label:?}: |Φw|/|w| = {scale} vs |σ| = {}",
                sigma.mid()
            );
            let dot: f64 =
                phi_w.iter().zip(&w_mid).map(|(a, b)| a * b).sum::<f64>() / (phi_norm * norm);
            assert!(dot.abs() > 1.0 - 1e-5, "direction not preserved: cos = {dot}");
        }
    }
}

#[test]
fn shipped_sol1_fixture_carries_reference_period() {
    let orbit = floquet_core::system::parse_orbit(&fixture("lorenz_sol1.json")).unwrap();
    assert!((orbit.tau.mid() - 1.027854840752128).abs() < 1e-8);
    assert_eq!(orbit.m_gamma, 32);
    assert!(orbit.midpoint_residual(512).unwrap() < 1e-9);
}

#[test]
fn shipped_zeta3_fixture_residual_on_fine_grid() {
    let orbit = floquet_core::system::parse_orbit(&fixture("zeta3_alpha3372.json")).unwrap();
    assert!(orbit.midpoint_residual(2048).unwrap() < 1e-9);
    assert!(!orbit.rigorous);
}

#[test]
fn sequence_json_roundtrip() {
    let orbit = floquet_core::system::parse_orbit(&fixture("lorenz_sol4.json")).unwrap();
    let seq = orbit.jacobian_coeffs().unwrap();
    let text = seq.to_json();
    let back = MatrixFourierSeq::from_json(&text).unwrap();
    assert_eq!(seq.stored_len(), back.stored_len());
    assert_eq!(seq.tail_c(), back.tail_c());
    for k in 0..seq.stored_len() {
        assert_eq!(seq.stored(k).re, back.stored(k).re);
        assert_eq!(seq.stored(k).im, back.stored(k).im);
    }
}
