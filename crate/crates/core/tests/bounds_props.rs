use cm_torus::bounds::{
    bound_report, good_reduction_torus_bounds, mt_order_bounds_nondegenerate, BoundContext, BoundFlags, Payload,
};
use cm_torus::rational::{ell_pow, Rational};
use num_bigint::BigInt;
use proptest::prelude::*;

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])
}

fn context() -> impl Strategy<Value = BoundContext> {
    (1usize..=6, prime(), 1u32..=3, 1u64..=4, any::<[bool; 3]>(), 1u64..=3, 1u64..=6)
        .prop_flat_map(|(g, ell, n, f, flags, h_k, deg)| {
            (Just((g, ell, n, f, flags, h_k, deg)), 1..=g + 1, prop::sample::select(vec![2u64, 4, 6, 10]))
        })
        .prop_map(|((g, ell, n, f, [ue, uk, good], h_k, deg), r, mu_e)| BoundContext {
            g,
            r,
            order_f: BigInt::from(f),
            ell,
            n,
            h_k,
            mu_e,
            mu_star: if good { 1 } else { mu_e },
            k_over_estar: deg,
            flags: BoundFlags { unramified_e: ue, unramified_k: uk, good_reduction: good },
            dim_t: None,
            mt_order: None,
        })
}

proptest! {
    #[test]
    fn nondegenerate_bounds_scale_by_ell_to_the_g_plus_one(g in 1usize..=8, ell in prime(), n in 1u32..=4) {
        let a = mt_order_bounds_nondegenerate(g, ell, n);
        let b = mt_order_bounds_nondegenerate(g, ell, n + 1);
        let s = ell_pow(ell, (g + 1) as i64);
        prop_assert_eq!(&a.lo * &s, b.lo);
        prop_assert_eq!(&a.hi * &s, b.hi);
        prop_assert!(a.lo <= a.hi);
    }

    #[test]
    fn torus_bounds_scale_by_ell_to_the_d(d in 1usize..=8, ell in prime(), n in 1u32..=4) {
        let a = good_reduction_torus_bounds(d, ell, n);
        let b = good_reduction_torus_bounds(d, ell, n + 1);
        let s = ell_pow(ell, d as i64);
        prop_assert_eq!(&a.lo * &s, b.lo);
        prop_assert_eq!(&a.hi * &s, b.hi);
        prop_assert!(a.lo <= ell_pow(ell, (d as u32 * n) as i64) && ell_pow(ell, (d as u32 * n) as i64) <= a.hi);
    }

    #[test]
    fn report_is_complete_and_consistent(ctx in context()) {
        let rep = bound_report(&ctx).unwrap();
        prop_assert_eq!(rep.entries.len(), 9);
        for e in &rep.entries {
            prop_assert_eq!(e.preconditions_met, e.unmet.is_empty());
            prop_assert_eq!(e.payload == Payload::NotApplicable, !e.preconditions_met);
            if let Payload::Interval { lower, upper } = &e.payload {
                prop_assert!(lower.lo <= lower.hi && lower.hi <= upper.lo && upper.lo <= upper.hi);
            }
        }
        let universal = rep.get("index-mt-universal").unwrap().upper_bound().unwrap().clone();
        if let Some(m) = rep.get("index-mt-divisibility").unwrap().modulus() {
            prop_assert!(m <= &universal);
        }
        if let Payload::Degree { lower, upper, lower_raw, upper_raw, .. } = &rep.get("division-field-degree").unwrap().payload {
            prop_assert!(lower_raw <= upper_raw);
            prop_assert!(lower <= upper);
            prop_assert!(lower >= &Rational::one());
        }
    }

    #[test]
    fn larger_torsion_never_tightens_the_index(ctx in context()) {
        let mut bigger = ctx.clone();
        bigger.order_f = &ctx.order_f * 2;
        let a = bound_report(&ctx).unwrap();
        let b = bound_report(&bigger).unwrap();
        let get = |r: &cm_torus::bounds::BoundReport| r.get("index-mt-universal").unwrap().upper_bound().unwrap().clone();
        prop_assert!(get(&a) <= get(&b));
    }
}
