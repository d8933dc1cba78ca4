//! Checks of derived quantities against the built-in reference data and
//! independent oracles.

use floquet_core::interval::Interval;
use floquet_core::linalg::RealMat;
use floquet_core::sequence::weight;
use floquet_core::solver::{init_guess, lambda_k, newton_refine, problem_from_orbit};
use floquet_core::system::builtin::{self, LORENZ_SIGMA, SOL4_RHO};
use floquet_core::system::parse_orbit;
use std::path::{Path, PathBuf};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

#[test]
fn sol4_zero_mode_jacobian_entries() {
    // A_0 for the rho = 23.8815 orbit is the Jacobian at the mean state:
    // [[-sigma, sigma, 0], [rho - xi0_3, -1, -xi0_1], [xi0_2, xi0_1, -8/3]].
    let orbit = builtin::lorenz_sol4_orbit(1e-9);
    let seq = orbit.jacobian_coeffs().unwrap();
    let a0 = &seq.stored(0).re;
    let xi0: Vec<f64> = orbit.xi[0].iter().map(|z| z.re.mid()).collect();
    assert!(a0[(0, 0)].contains(-LORENZ_SIGMA));
    assert!(a0[(0, 1)].contains(LORENZ_SIGMA));
    assert!(a0[(0, 2)].contains(0.0) && a0[(0, 2)].width() < 1e-12);
    assert!(a0[(1, 0)].contains(SOL4_RHO - xi0[2]));
    assert!(a0[(1, 1)].contains(-1.0));
    assert!(a0[(1, 2)].contains(-xi0[0]));
    assert!(a0[(2, 0)].contains(xi0[1]));
    assert!(a0[(2, 1)].contains(xi0[0]));
    assert!(a0[(2, 2)].contains(-8.0 / 3.0));
    // The reference zero mode is reproduced by the refinement.
    assert!((xi0[2] - 22.399077327399255).abs() < 1e-9);
    // Odd doubled-basis coefficients vanish identically.
    for k in (1..seq.stored_len()).step_by(2) {
        assert!(seq.is_stored_zero(k), "odd coefficient {k} not zero");
    }
}

#[test]
fn sol4_s_norm_matches_brute_scan() {
    let orbit = builtin::lorenz_sol4_orbit(0.0);
    let seq = orbit.jacobian_coeffs().unwrap();
    let bound = seq.s_norm_bound(2.0).unwrap();
    let mut brute: f64 = 0.0;
    for k in 0..seq.stored_len() {
        brute = brute.max(seq.coeff_abs_upper(k as i64) * weight(k as i64).powi(2));
    }
    assert!(bound >= brute, "norm bound {bound} under brute scan {brute}");
    assert!(bound <= brute * (1.0 + 1e-9), "norm bound {bound} loose vs {brute}");
}

#[test]
fn lambda_enclosures_contain_dense_inverses() {
    // For k in [m, m+50] the certified enclosure of Λ_k^{-1} contains the
    // plain floating point inverse of the midpoint block.
    let orbit = parse_orbit(&fixture("lorenz_sol4.json")).unwrap();
    let m = 60;
    let prob = problem_from_orbit(&orbit, m, 2.0).unwrap();
    let x0 = init_guess(&orbit, m).unwrap();
    let x = newton_refine(&x0, &prob, 1e-12, 30).unwrap();
    for k in (m..m + 50).step_by(5) {
        let lam = lambda_k(k, &x.r_mat, &prob.a_seq, &prob.tau).unwrap();
        let dim = lam.rows();
        let point = RealMat::from_vec(dim, dim, lam.midpoint());
        let inv = point.inverse().unwrap();
        let cert = floquet_core::solver::lambda_k_inverse(&lam).unwrap();
        for i in 0..dim {
            for j in 0..dim {
                assert!(
                    cert.enclosure[(i, j)].contains(inv[(i, j)]),
                    "k={k}: certified inverse misses the dense inverse at ({i},{j})"
                );
            }
        }
    }
}

#[test]
fn candidate_q_at_zero_encloses_identity() {
    // A candidate satisfying the initial-condition equation exactly has
    // Q(0) ⊇ I.
    let orbit = builtin::lorenz_sol4_orbit(1e-9);
    let m = 40;
    let prob = problem_from_orbit(&orbit, m, 2.0).unwrap();
    let x0 = init_guess(&orbit, m).unwrap();
    let x = newton_refine(&x0, &prob, 1e-13, 40).unwrap();
    let q0 = x.q_sequence_with_ball(1e-12, 2.0).eval_at(&Interval::point(0.0));
    for i in 0..3 {
        for j in 0..3 {
            let expect = if i == j { 1.0 } else { 0.0 };
            assert!(
                q0[(i, j)].contains(expect) || (q0[(i, j)].mid() - expect).abs() < 1e-11,
                "Q(0)[{i}{j}] = {:?}",
                q0[(i, j)]
            );
        }
    }
}

#[test]
fn jacobian_star_blocks() {
    // ∂f_⋆/∂Q_{k,1} is the doubled identity block and ∂f_⋆/∂R vanishes.
    let orbit = builtin::lorenz_sol4_orbit(0.0);
    let m = 6;
    let prob = problem_from_orbit(&orbit, m, 2.0).unwrap();
    let x = init_guess(&orbit, m).unwrap();
    let jac = floquet_core::solver::jacobian_assemble(&x, &prob.midpoint());
    let nsq = 9;
    for p in 0..nsq {
        for q in 0..nsq {
            let expect_r = 0.0;
            assert_eq!(jac[(p, q)], expect_r, "∂f_star/∂R must vanish");
            let expect_q1 = if p == q { 2.0 } else { 0.0 };
            assert_eq!(jac[(p, 2 * nsq + q)], expect_q1, "∂f_star/∂Q_1,1 must be 2I");
            assert_eq!(jac[(p, 2 * nsq + nsq + q)], 0.0, "∂f_star/∂Q_1,2 must vanish");
        }
    }
}

#[test]
fn constant_diagonal_field_has_positive_multiplier_signs() {
    use floquet_core::eigen::{classify, verified_eigenpairs, DirectionLabel};
    use floquet_core::interval::ComplexInterval;
    use floquet_core::system::{OrbitEnclosure, VectorFieldSpec};
    use floquet_core::verifier::VerifiedFloquetForm;

    // Synthetic verified form over a diagonal R with a trivial direction;
    // the componentwise ratio recovery must return +1 for each real pair.
    let n = 3;
    let tau = 0.7;
    let r_mat = RealMat::from_rows(&[
        vec![-1.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0],
        vec![0.0, 0.0, -2.0],
    ]);
    let q = vec![(RealMat::identity(n), RealMat::zeros(n, n))];
    let candidate = floquet_core::solver::FloquetCandidate { n, m: 1, tau, r_mat, q };
    let form = VerifiedFloquetForm {
        candidate,
        radius: 1e-13,
        s: 2.0,
        tau: Interval::point(tau),
        conditional: false,
    };
    let orbit = OrbitEnclosure {
        field: VectorFieldSpec::lorenz(10.0, 20.0, 8.0 / 3.0),
        tau: Interval::point(tau),
        s_star: 2.0,
        m_gamma: 0,
        xi: vec![vec![
            ComplexInterval::real(Interval::point(0.5)),
            ComplexInterval::real(Interval::point(0.5)),
            ComplexInterval::real(Interval::point(1.0)),
        ]],
        r_gamma: 0.0,
        rigorous: false,
    };
    let pairs = verified_eigenpairs(&form.r_enclosure()).unwrap();
    let cls = classify(pairs, 1e-6).unwrap();
    for (pair, label) in &cls.pairs {
        if *label == DirectionLabel::Trivial {
            continue;
        }
        let (sign, ratio) =
            floquet_core::bundle::multiplier_sign(&form, &orbit, pair).unwrap();
        assert_eq!(sign, 1, "diagonal stable field must have positive multipliers");
        assert!(ratio > 0.0);
    }
}
