//! Property suites for the interval backbone: exact rational containment,
//! inclusion monotonicity and corner domination of the matrix norms.

use floquet_core::interval::{Interval, IntervalMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

fn contains_rat(iv: &Interval, q: &BigRational) -> bool {
    &rat(iv.lo()) <= q && q <= &rat(iv.hi())
}

/// Dyadic rationals with a few significant bits keep the exact results
/// representable in BigRational while exercising the rounding paths.
fn dyadic(rng: &mut impl Rng) -> f64 {
    let mant: i64 = rng.random_range(-(1i64 << 40)..(1i64 << 40));
    let exp: i32 = rng.random_range(-20..20);
    mant as f64 * 2f64.powi(exp)
}

#[test]
fn rational_oracle_containment_100k() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..100_000 {
        let a = dyadic(&mut rng);
        let b = dyadic(&mut rng);
        let ia = Interval::point(a);
        let ib = Interval::point(b);
        let (ra, rb) = (rat(a), rat(b));
        assert!(contains_rat(&ia.add(&ib), &(&ra + &rb)), "add trial {trial}");
        assert!(contains_rat(&ia.sub(&ib), &(&ra - &rb)), "sub trial {trial}");
        assert!(contains_rat(&ia.mul(&ib), &(&ra * &rb)), "mul trial {trial}");
        if b != 0.0 {
            assert!(
                contains_rat(&ia.div(&ib).unwrap(), &(&ra / &rb)),
                "div trial {trial}"
            );
        }
    }
}

#[test]
fn random_matrix_product_contains_rational_product() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let a = IntervalMatrix::from_fn(3, 3, |_, _| Interval::point(dyadic(&mut rng)));
        let b = IntervalMatrix::from_fn(3, 3, |_, _| Interval::point(dyadic(&mut rng)));
        let p = a.try_mul(&b).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut exact = BigRational::from_integer(BigInt::from(0));
                for c in 0..3 {
                    exact += rat(a[(i, c)].mid()) * rat(b[(c, j)].mid());
                }
                assert!(contains_rat(&p[(i, j)], &exact));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    /// a ⊆ a′, b ⊆ b′ ⇒ op(a,b) ⊆ op(a′,b′) for all four operations.
    #[test]
    fn inclusion_monotonicity(
        c1 in -50.0f64..50.0, r1 in 0.0f64..5.0, grow1 in 0.0f64..3.0,
        c2 in -50.0f64..50.0, r2 in 0.0f64..5.0, grow2 in 0.0f64..3.0,
    ) {
        let a = Interval::new(c1 - r1, c1 + r1);
        let b = Interval::new(c2 - r2, c2 + r2);
        let a_wide = Interval::new(c1 - r1 - grow1, c1 + r1 + grow1);
        let b_wide = Interval::new(c2 - r2 - grow2, c2 + r2 + grow2);
        prop_assert!(a_wide.add(&b_wide).contains_interval(&a.add(&b)));
        prop_assert!(a_wide.sub(&b_wide).contains_interval(&a.sub(&b)));
        prop_assert!(a_wide.mul(&b_wide).contains_interval(&a.mul(&b)));
        if !b_wide.contains(0.0) {
            prop_assert!(a_wide.div(&b_wide).unwrap().contains_interval(&a.div(&b).unwrap()));
        }
    }

    /// Norm bounds never undercut a corner enumeration of the enclosure.
    #[test]
    fn norms_dominate_corner_enumeration(entries in prop::collection::vec((-9.0f64..9.0, 0.0f64..2.0), 4)) {
        let m = IntervalMatrix::from_fn(2, 2, |i, j| {
            let (c, r) = entries[2 * i + j];
            Interval::new(c - r, c + r)
        });
        let abs_sup = m.abs_sup();
        let rowsum = m.rowsum_norm();
        // enumerate all 16 corner matrices
        for mask in 0..16u32 {
            let pick = |i: usize, j: usize| {
                let iv = m[(i, j)];
                if mask & (1 << (2 * i + j)) != 0 { iv.hi() } else { iv.lo() }
            };
            let mut max_abs: f64 = 0.0;
            let mut max_row: f64 = 0.0;
            for i in 0..2 {
                let mut row = 0.0;
                for j in 0..2 {
                    let v = pick(i, j);
                    max_abs = max_abs.max(v.abs());
                    row += v.abs();
                }
                max_row = max_row.max(row);
            }
            prop_assert!(abs_sup >= max_abs);
            prop_assert!(rowsum >= max_row);
        }
    }

    /// The verified power enclosure contains sampled exact powers.
    #[test]
    fn pow_contains_samples(base in 0.1f64..50.0, s in -4.0f64..4.0) {
        let iv = floquet_core::interval::pow_enclosure(&Interval::point(base), s).unwrap();
        prop_assert!(iv.contains(base.powf(s)) || (iv.mid() - base.powf(s)).abs() < 1e-12 * base.powf(s).abs());
    }
}
