//! End-to-end verification of problems with known solutions.

use floquet_core::interval::{Interval, IntervalMatrix};
use floquet_core::linalg::RealMat;
use floquet_core::sequence::{MatrixFourierSeq, SeqCoeff};
use floquet_core::solver::{newton_refine, residual_norm, FloquetCandidate, GalerkinProblem};
use floquet_core::verifier::{verify_problem, VerifierParams};

fn constant_problem(a0: &RealMat, tau: f64, m: usize) -> GalerkinProblem {
    let n = a0.rows();
    let coeffs = vec![SeqCoeff {
        re: IntervalMatrix::from_fn(n, n, |i, j| Interval::point(a0[(i, j)])),
        im: IntervalMatrix::zeros(n, n),
    }];
    let a_seq = MatrixFourierSeq::new(n, Interval::point(tau), coeffs, 0.0, 2.0).unwrap();
    GalerkinProblem::new(a_seq, m, 2.0).unwrap()
}

fn constant_candidate(a0: &RealMat, tau: f64, m: usize) -> FloquetCandidate {
    let n = a0.rows();
    let mut q = vec![(RealMat::identity(n), RealMat::zeros(n, n))];
    for _ in 1..m {
        q.push((RealMat::zeros(n, n), RealMat::zeros(n, n)));
    }
    FloquetCandidate { n, m, tau, r_mat: a0.clone(), q }
}

/// Scalar problem `ẏ = (a + b cos(2πt/τ)) y`: the periodic factor is
/// `exp((bτ/2π) sin(2πt/τ))` whose doubled-basis coefficients are
/// `Q_{2l} = (-i)^l I_l(bτ/2π)` with modified Bessel functions `I_l`.
fn bessel_coefficient(l: usize, z: f64) -> (f64, f64) {
    let mut term = (z / 2.0f64).powi(l as i32);
    for i in 1..=l {
        term /= i as f64;
    }
    let mut sum = 0.0;
    let mut m = 0usize;
    loop {
        sum += term;
        m += 1;
        term *= (z / 2.0) * (z / 2.0) / (m as f64 * (m + l) as f64);
        if term.abs() < 1e-24 {
            break;
        }
    }
    match l % 4 {
        0 => (sum, 0.0),
        1 => (0.0, -sum),
        2 => (-sum, 0.0),
        _ => (0.0, sum),
    }
}

fn cosine_problem(a: f64, b: f64, tau: f64, m: usize) -> GalerkinProblem {
    // A(t) = a + b cos(2πt/τ): doubled-basis coefficients A_0 = a, A_2 = b/2.
    let coeffs = vec![
        SeqCoeff {
            re: IntervalMatrix::from_rows(&[vec![a]]),
            im: IntervalMatrix::zeros(1, 1),
        },
        SeqCoeff {
            re: IntervalMatrix::zeros(1, 1),
            im: IntervalMatrix::zeros(1, 1),
        },
        SeqCoeff {
            re: IntervalMatrix::from_rows(&[vec![b / 2.0]]),
            im: IntervalMatrix::zeros(1, 1),
        },
    ];
    let a_seq = MatrixFourierSeq::new(1, Interval::point(tau), coeffs, 0.0, 2.0).unwrap();
    GalerkinProblem::new(a_seq, m, 2.0).unwrap()
}

fn cosine_candidate(a: f64, b: f64, tau: f64, m: usize) -> FloquetCandidate {
    let z = b * tau / (2.0 * std::f64::consts::PI);
    let mut q = Vec::with_capacity(m);
    for k in 0..m {
        if k % 2 == 1 {
            q.push((RealMat::zeros(1, 1), RealMat::zeros(1, 1)));
        } else {
            let (re, im) = bessel_coefficient(k / 2, z);
            q.push((
                RealMat::from_rows(&[vec![re]]),
                if k == 0 { RealMat::zeros(1, 1) } else { RealMat::from_rows(&[vec![im]]) },
            ));
        }
    }
    FloquetCandidate { n: 1, m, tau, r_mat: RealMat::from_rows(&[vec![a]]), q }
}

#[test]
fn constant_coefficient_verifies_tightly() {
    let a0 = RealMat::from_rows(&[vec![-1.0, 0.0], vec![0.0, -2.0]]);
    let prob = constant_problem(&a0, 1.0, 6);
    let x = constant_candidate(&a0, 1.0, 6);
    let params = VerifierParams::new(2.0, 6, 12);
    let (form, report) = verify_problem(&x, &prob, &params, false).unwrap();
    assert!(report.success);
    assert!(form.radius < 1e-10, "radius = {}", form.radius);
    // R enclosure contains A0 and Q(θ) contains I.
    assert!(form.r_enclosure().contains_point(a0.data()));
    let q = form.q_enclosure();
    for g in 0..20 {
        let theta = 2.0 * g as f64 / 19.0;
        let q_theta = q.eval_at(&Interval::point(theta));
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!(
                    q_theta[(i, j)].contains(expect),
                    "Q({theta})[{i}{j}] = {} misses {expect}",
                    q_theta[(i, j)]
                );
            }
        }
    }
}

#[test]
fn scalar_cosine_newton_hits_bessel_coefficients() {
    let (a, b, tau) = (-0.5, 1.0, 1.0);
    let m = 30;
    let prob = cosine_problem(a, b, tau, m);
    // Perturbed start converges back to the Bessel data.
    let mut x0 = cosine_candidate(a, b, tau, m);
    x0.r_mat = RealMat::from_rows(&[vec![a + 0.05]]);
    for k in 1..6 {
        x0.q[k].0 = RealMat::from_rows(&[vec![x0.q[k].0[(0, 0)] + 0.01]]);
    }
    let x = newton_refine(&x0, &prob, 1e-13, 40).unwrap();
    assert!((x.r_mat[(0, 0)] - a).abs() < 1e-12, "R = {}", x.r_mat[(0, 0)]);
    let z = b * tau / (2.0 * std::f64::consts::PI);
    for k in 0..20 {
        let (re, im) = if k % 2 == 0 { bessel_coefficient(k / 2, z) } else { (0.0, 0.0) };
        assert!(
            (x.q[k].0[(0, 0)] - re).abs() < 1e-11,
            "Q_{k} re: {} vs {re}",
            x.q[k].0[(0, 0)]
        );
        assert!((x.q[k].1[(0, 0)] - im).abs() < 1e-11);
    }
}

#[test]
fn block_operator_inverse_pair() {
    // A applied to f reproduces the Newton step on the head blocks, and
    // A∘A† is close to the identity (its defect is what feeds the Z⁰ bound).
    let (a, b, tau) = (-0.5, 1.0, 1.0);
    let m = 12;
    let big_m = 18;
    let prob = cosine_problem(a, b, tau, m);
    let x = newton_refine(&cosine_candidate(a, b, tau, m), &prob, 1e-13, 40).unwrap();
    let op = floquet_core::verifier::build_block_operator(&x, &prob, big_m).unwrap();

    let nsq = 1;
    let dim = 2 * nsq * big_m;
    // Round trip x -> A†x -> A(A†x) stays put.
    let mut v = vec![0.0; dim];
    for (i, slot) in v.iter_mut().enumerate() {
        *slot = ((i * 83 % 17) as f64 - 8.0) / 8.0;
    }
    let w = op.apply_a(&op.apply_a_dag(&v));
    for i in 0..dim {
        assert!((w[i] - v[i]).abs() < 1e-9, "A∘A† defect at {i}: {} vs {}", w[i], v[i]);
    }

    // A applied to the packed residual is the Newton correction.
    let mid = prob.midpoint();
    let f = floquet_core::solver::f_eval_point(&x, &mid);
    let mut f_padded = f.clone();
    f_padded.resize(dim, 0.0);
    let step = op.apply_a(&f_padded);
    let lu_step = op.df_m.lu().unwrap().solve_vec(&f);
    for i in 0..2 * nsq * m {
        assert!((step[i] - lu_step[i]).abs() < 1e-12);
    }
}

#[test]
fn model_matches_direct_integration() {
    // Q(t)e^{R̄t} against direct integration of the linear system.
    let (a, b, tau) = (-0.5, 1.0, 1.0);
    let m = 30;
    let prob = cosine_problem(a, b, tau, m);
    let x = newton_refine(&cosine_candidate(a, b, tau, m), &prob, 1e-13, 40).unwrap();
    let defect = floquet_core::verifier::fundamental_solution_defect(&x, &prob, 24).unwrap();
    assert!(defect < 1e-8, "fundamental solution defect {defect}");
}

#[test]
fn generic_tail_mode_still_verifies_scalar_problem() {
    // With the coefficient-aware sharpenings disabled the generic bounds
    // must still close on a small well conditioned problem.
    let (a, b, tau) = (-0.5, 1.0, 1.0);
    let m = 30;
    let prob = cosine_problem(a, b, tau, m);
    let x = newton_refine(&cosine_candidate(a, b, tau, m), &prob, 1e-13, 40).unwrap();
    let mut params = VerifierParams::new(2.0, m, 40);
    params.sharp = floquet_core::verifier::SharpMode::Off;
    let (form, report) = verify_problem(&x, &prob, &params, false).unwrap();
    assert!(report.success && !report.sharp_used);
    // Generic tails are coarser than the coefficient-aware ones but must
    // still certify a usable radius.
    assert!(form.radius < 0.1, "generic radius {}", form.radius);
}

#[test]
fn decay_mismatch_is_rejected() {
    let (a, b, tau) = (-0.5, 1.0, 1.0);
    let prob = cosine_problem(a, b, tau, 10);
    // Requesting s above the stored tail decay must fail early.
    assert!(matches!(
        floquet_core::solver::GalerkinProblem::new(prob.a_seq.clone(), 10, 2.5),
        Err(floquet_core::Error::DecayTooWeak { .. })
    ));
}

#[test]
fn orbit_finder_reports_no_convergence_from_garbage() {
    use floquet_core::system::{orbit_candidate_find, OrbitGuess, VectorFieldSpec};
    let field = VectorFieldSpec::lorenz(10.0, 23.8815, 8.0 / 3.0);
    // A state nowhere near a periodic orbit with a nonsense period.
    let guess = OrbitGuess::Coefficients {
        tau: 0.05,
        xi: vec![vec![(1e4, 0.0), (1e4, 0.0), (1e4, 0.0)]],
    };
    let out = orbit_candidate_find(&field, &guess, 4, 1e-6);
    assert!(
        matches!(out, Err(floquet_core::Error::NoConvergence(_)))
            || matches!(out, Err(floquet_core::Error::SingularJacobian)),
        "expected a convergence failure"
    );
}

#[test]
fn sol4_candidate_matches_reference_r() {
    let fixture = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures/lorenz_sol4.json");
    let orbit = floquet_core::system::parse_orbit(&fixture).unwrap();
    let prob = floquet_core::solver::problem_from_orbit(&orbit, 60, 2.0).unwrap();
    let x0 = floquet_core::solver::init_guess(&orbit, 60).unwrap();
    let x = newton_refine(&x0, &prob, 1e-12, 40).unwrap();
    let mut dev = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            dev = dev.max((x.r_mat[(i, j)] - floquet_core::system::builtin::SOL4_R[i][j]).abs());
        }
    }
    assert!(dev <= 1e-3, "R deviates from the reference by {dev}");
}

#[test]
fn scalar_cosine_verifies_and_contains_closed_form() {
    let (a, b, tau) = (-0.5, 1.0, 1.0);
    let m = 30;
    let prob = cosine_problem(a, b, tau, m);
    let x0 = cosine_candidate(a, b, tau, m);
    let x = newton_refine(&x0, &prob, 1e-13, 40).unwrap();
    assert!(residual_norm(&x, &prob) < 1e-13);
    let params = VerifierParams::new(2.0, m, 40);
    let (form, report) = verify_problem(&x, &prob, &params, false).unwrap();
    assert!(report.success, "report: {}", report.to_json());
    assert!(form.radius < 1e-6, "radius = {}", form.radius);
    // Exact solution data inside the verified ball.
    assert!(form.r_enclosure()[(0, 0)].contains(a));
    let z = b * tau / (2.0 * std::f64::consts::PI);
    let q = form.q_enclosure();
    for k in 0..=15usize {
        let (re, im) = if k % 2 == 0 { bessel_coefficient(k / 2, z) } else { (0.0, 0.0) };
        let (qre, qim) = q.coeff_pair(k as i64);
        assert!(qre[(0, 0)].contains(re), "Q_{k} re {} misses {re}", qre[(0, 0)]);
        assert!(qim[(0, 0)].contains(im), "Q_{k} im {} misses {im}", qim[(0, 0)]);
    }
}
