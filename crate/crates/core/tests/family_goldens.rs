//! Regression goldens for the family `y^p = x(1 − x)`: `|F|` as first
//! computed, plus the structural facts that hold for every `p`.

use cm_torus::family::{build_family, family_report, MAX_FAMILY_PRIME};
use cm_torus::rational::Rational;
use num_bigint::BigInt;

const ORDER_F: &[(u64, u64)] = &[
    (3, 1),
    (5, 1),
    (7, 1),
    (11, 3),
    (13, 5),
    (17, 17),
    (19, 27),
    (23, 267),
    (29, 4520),
    (31, 8649),
];

#[test]
fn torsion_goldens() {
    for &(p, f) in ORDER_F {
        let r = family_report(p).unwrap();
        assert_eq!(r.order_f, Rational::integer(f), "p = {p}");
    }
}

#[test]
fn every_prime_up_to_the_cap() {
    for p in (3..=MAX_FAMILY_PRIME).filter(|&p| cm_torus::arith::is_prime(p)) {
        let r = family_report(p).unwrap();
        assert_eq!(r.rank, ((p + 1) / 2) as usize);
        assert!(r.nondegenerate && r.simple);
        assert_eq!(r.ratio, Rational::new(BigInt::from(2).pow(r.rank as u32), p));
        assert_eq!(build_family(p).unwrap().cm_type.s().len(), r.genus);
    }
}
