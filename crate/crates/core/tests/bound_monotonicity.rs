//! Parameter sweeps: enlarging the tail parameters only tightens bounds,
//! and classification labels survive enclosure shrinking.

use floquet_core::eigen::{classify, verified_eigenpairs, DirectionLabel};
use floquet_core::interval::IntervalMatrix;
use floquet_core::solver::{init_guess, newton_refine, problem_from_orbit};
use floquet_core::system::builtin;
use floquet_core::verifier::{
    build_block_operator, compute_k_c_lambda, y_bounds, z_bounds, LPolicy, VerifierParams,
};

#[test]
fn tail_coefficients_shrink_with_m() {
    let orbit = builtin::lorenz_sol4_orbit(1e-8);
    let m = 30;
    let prob = problem_from_orbit(&orbit, m, 2.0).unwrap();
    let x0 = init_guess(&orbit, m).unwrap();
    let x = newton_refine(&x0, &prob, 1e-12, 40).unwrap();
    let (_, c_lambda) =
        compute_k_c_lambda(&x.r_mat, &prob.a_seq, &prob.tau, m, 1_000_000).unwrap();
    let mut prev: Option<(f64, f64, f64)> = None;
    for big_m in [36usize, 50, 66, 90] {
        let params = VerifierParams::new(2.0, m, big_m);
        let op = build_block_operator(&x, &prob, big_m).unwrap();
        let (_, y_m, _) = y_bounds(&x, &prob, &op, &params, c_lambda).unwrap();
        let z = z_bounds(&x, &prob, &op, &params, c_lambda).unwrap();
        if let Some((py, pz1, pz2)) = prev {
            assert!(y_m <= py * (1.0 + 1e-12), "Y_M grew: {py} -> {y_m} at M = {big_m}");
            assert!(z.z_m1 <= pz1 * (1.0 + 1e-12), "Z_M linear grew at M = {big_m}");
            assert!(z.z_m2 <= pz2 * (1.0 + 1e-12), "Z_M quadratic grew at M = {big_m}");
        }
        prev = Some((y_m, z.z_m1, z.z_m2));
    }
}

#[test]
fn z1_shrinks_with_larger_series_cutoffs() {
    let orbit = builtin::lorenz_sol4_orbit(1e-8);
    let m = 24;
    let big_m = 30;
    let prob = problem_from_orbit(&orbit, m, 2.0).unwrap();
    let x0 = init_guess(&orbit, m).unwrap();
    let x = newton_refine(&x0, &prob, 1e-12, 40).unwrap();
    let (_, c_lambda) =
        compute_k_c_lambda(&x.r_mat, &prob.a_seq, &prob.tau, m, 1_000_000).unwrap();
    let op = build_block_operator(&x, &prob, big_m).unwrap();
    let mut prev: Option<f64> = None;
    for extra in [2usize, 8, 32, 128] {
        let mut params = VerifierParams::new(2.0, m, big_m);
        params.l_policy = LPolicy::Fixed(extra);
        let z = z_bounds(&x, &prob, &op, &params, c_lambda).unwrap();
        let max_z1: f64 =
            z.z1.iter().flat_map(|b| b.iter().copied()).fold(0.0, f64::max);
        if let Some(p) = prev {
            assert!(
                max_z1 <= p * (1.0 + 1e-10),
                "Z¹ grew when the cutoff rose: {p} -> {max_z1} at L offset {extra}"
            );
        }
        prev = Some(max_z1);
    }
}

#[test]
fn labels_survive_enclosure_shrinking() {
    // Middle row decoupled so the trivial eigenvalue is exactly 1e-12.
    let base = IntervalMatrix::from_rows(&[
        vec![-2.0, 0.1, 0.0],
        vec![0.0, 1e-12, 0.0],
        vec![0.1, 0.0, 1.5],
    ]);
    let labels_at = |pad: f64| -> Vec<DirectionLabel> {
        let pairs = verified_eigenpairs(&base.inflate(pad)).unwrap();
        let mut cls = classify(pairs, 1e-5)
            .unwrap()
            .pairs
            .iter()
            .map(|(p, l)| (p.mu.re.mid(), *l))
            .collect::<Vec<_>>();
        cls.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        cls.into_iter().map(|(_, l)| l).collect()
    };
    let wide = labels_at(1e-4);
    let tight = labels_at(1e-9);
    assert_eq!(wide, tight, "labels changed when the enclosure shrank");
    // Containment sanity: tighter Lyapunov enclosures nest inside wider ones.
    let wide_pairs = verified_eigenpairs(&base.inflate(1e-4)).unwrap();
    let tight_pairs = verified_eigenpairs(&base.inflate(1e-9)).unwrap();
    for tp in &tight_pairs {
        let hits = wide_pairs
            .iter()
            .filter(|wp| {
                wp.mu.re.contains(tp.mu.re.mid()) && wp.mu.im.contains(tp.mu.im.mid())
            })
            .count();
        assert_eq!(hits, 1);
    }
}
