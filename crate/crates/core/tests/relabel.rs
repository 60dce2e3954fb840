//! Rank and `|F|` do not depend on how the Galois group is written down.

use std::sync::Arc;

use cm_torus::cm::CmDatum;
use cm_torus::group::GroupTable;
use cm_torus::lattice::{mt_invariants, reflex_norm_matrix};
use proptest::prelude::*;
use proptest::sample::Index;

fn invariants(datum: &CmDatum, s: &[String]) -> (usize, String) {
    let t = datum.cm_type_from_labels(s).unwrap();
    let m = reflex_norm_matrix(&t.reflex().unwrap());
    let inv = mt_invariants(&m, datum.g()).unwrap();
    (inv.rank, inv.order_f.to_string())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relabelling_preserves_invariants(
        m in prop::sample::select(vec![5u64, 7, 9, 11, 13, 15, 16]),
        perm_seed in any::<u64>(),
        pick in any::<Index>(),
    ) {
        let base = CmDatum::cyclotomic(m).unwrap();
        let types = base.enumerate_cm_types().unwrap();
        let t = &types[pick.index(types.len())];
        let s = t.s_labels();

        let g = base.group();
        let n = g.order();
        // a pseudo-random permutation: element i is stored at position perm[i]
        let mut perm: Vec<usize> = (0..n).collect();
        let mut x = perm_seed | 1;
        for i in (1..n).rev() {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            perm.swap(i, (x % (i as u64 + 1)) as usize);
        }
        let mut inv = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let mul: Vec<Vec<usize>> = (0..n)
            .map(|a| (0..n).map(|b| perm[g.mul(inv[a], inv[b])]).collect())
            .collect();
        let labels: Vec<String> = (0..n).map(|a| g.label(inv[a]).to_string()).collect();
        let table = Arc::new(GroupTable::from_labelled_table(mul, labels).unwrap());
        let tau = table.element_by_label(g.label(base.tau())).unwrap();
        let h = table.trivial_subgroup();
        let relabelled = CmDatum::new(table, h, tau).unwrap();

        prop_assert_eq!(invariants(&base, &s), invariants(&relabelled, &s));
    }
}
