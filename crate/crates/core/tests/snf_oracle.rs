use cm_torus::lattice::{determinant, smith_normal_form, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn det(m: &[Vec<i64>]) -> i64 {
    if m.is_empty() {
        return 1;
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det(&minor)
        })
        .sum()
}

fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|b| b.count_ones() as usize == k)
        .map(|b| (0..n).filter(|i| b >> i & 1 == 1).collect())
        .collect()
}

fn minors_gcd(m: &[Vec<i64>], k: usize) -> i64 {
    let mut g = 0i64;
    for rs in choose(m.len(), k) {
        for cs in choose(m[0].len(), k) {
            let sub: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
            g = g.gcd(&det(&sub));
        }
    }
    g
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..=3, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn prefix_products_are_minor_gcds(m in matrix()) {
        let snf = smith_normal_form(&IntMatrix::from_rows(&m));
        let mut prefix = BigInt::one();
        for k in 1..=m.len().min(m[0].len()) {
            prefix *= &snf.diag[k - 1];
            prop_assert_eq!(&prefix, &BigInt::from(minors_gcd(&m, k)));
        }
    }

    #[test]
    fn transforms_are_unimodular(m in matrix()) {
        let a = IntMatrix::from_rows(&m);
        let snf = smith_normal_form(&a);
        let (l, r) = snf.transforms.clone().unwrap();
        prop_assert_eq!(l.mul(&a).mul(&r), snf.diagonal_matrix(a.rows(), a.cols()));
        prop_assert!(determinant(&l).abs().is_one());
        prop_assert!(determinant(&r).abs().is_one());
        for w in snf.diag.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
        }
        prop_assert!(snf.diag.iter().all(|d| !d.is_negative()));
    }
}
