use cm_torus::bounds::good_reduction_torus_bounds;
use cm_torus::rational::Rational;
use cm_torus::torus::{cartan_and_normalizer, filtration_orders, CartanDatum, FiltrationSpec, FiniteRing};
use proptest::prelude::*;

fn odd_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn unit_count_inside_torus_interval(
        ell in odd_prime(),
        level in 1u32..=2,
        lower in prop::collection::vec(-3i64..=3, 2..=3),
    ) {
        let mut coeffs = lower;
        coeffs.push(1);
        let ring = FiniteRing::new(ell, level, &coeffs, &[0, 1]).unwrap();
        prop_assume!(ring.separable_mod_ell());
        let interval = good_reduction_torus_bounds(ring.degree(), ell, level);
        prop_assert!(interval.contains(&Rational::integer(ring.unit_count())));
    }

    #[test]
    fn unramified_cartan_has_index_two(ell in odd_prime(), c in -3i64..=3, d in -3i64..=3) {
        let disc = c * c + 4 * d;
        prop_assume!(disc % ell as i64 != 0);
        let r = cartan_and_normalizer(&CartanDatum { c, d, ell, n: 1 }).unwrap();
        prop_assert_eq!(r.index, Rational::integer(2));
        prop_assert!(r.witness_in_normalizer && !r.witness_in_cartan);
        prop_assert_eq!(r.normalizer_order, r.group_normalizer_order);
    }
}

#[test]
fn counts_do_not_depend_on_thread_count() {
    let ring = FiniteRing::new(3, 2, &[1, 1, 1, 1, 1], &[0, 0, 0, 0, 1]).unwrap();
    let run = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap().install(|| ring.counts());
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
}

#[test]
fn filtration_formula_at_several_primes() {
    for (ell, unramified_d) in [(3u64, -1i64), (5, 2), (7, 3)] {
        for (d, first) in [(unramified_d, ell + 1), (ell as i64, 2 * ell)] {
            let rep = filtration_orders(&FiltrationSpec { ell, level: 3, d, k_max: 1 }).unwrap();
            let want = vec![Rational::integer(first), Rational::integer(ell)];
            assert_eq!(rep.quotients, want, "ell = {ell}, d = {d}");
            assert!(rep.stable);
        }
    }
}
