use cm_torus::lattice::f_bound;
use cm_torus_cli::selftest::{run_criterion, FixtureSource, Harness};
use num_bigint::BigUint;

fn off_by_one(x: u64) -> BigUint {
    f_bound(x) + 1u32
}

fn constant(_: u64) -> BigUint {
    BigUint::from(1u32)
}

#[test]
fn f_table_detects_corrupted_bound() {
    let h = Harness::new(FixtureSource::Embedded);
    assert!(run_criterion(&h, 1).passed);
    let o = run_criterion(&Harness::new(FixtureSource::Embedded).with_f_bound(off_by_one), 1);
    assert!(!o.passed);
    assert!(o.detail.contains("f(3) = 3"), "{}", o.detail);
}

#[test]
fn bound_checks_detect_too_small_bound() {
    for criterion in [3, 4] {
        let o = run_criterion(&Harness::new(FixtureSource::Embedded).with_f_bound(constant), criterion);
        assert!(!o.passed, "criterion {criterion}: {}", o.detail);
    }
}
