use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cm_torus_cli::report::{Envelope, EntryResult, Status};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn cmtorus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmtorus")).args(args).output().expect("spawn cmtorus")
}

fn json(args: &[&str]) -> (Envelope, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = cmtorus(&all);
    let env: Envelope = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (env, out.status.code().unwrap())
}

#[test]
fn family_p5() {
    let (env, code) = json(&["family", "--p", "5"]);
    assert_eq!(code, 0);
    match &env.report.entries[0].result {
        EntryResult::Family(f) => {
            assert_eq!(f.rank, 3);
            assert_eq!(f.ratio.to_string(), "8/5");
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn hadamard_n3() {
    let (env, code) = json(&["hadamard", "--n", "3"]);
    assert_eq!(code, 0);
    match &env.report.entries[0].result {
        EntryResult::Hadamard(h) => assert_eq!((h.max_abs_det, h.bound, h.exhaustive), (2, 2, true)),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn reflex_quadratic_is_identity() {
    let cfg = fixture("quadratic.toml");
    let (env, code) = json(&["reflex", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    let EntryResult::Reflex(v) = &env.report.entries[0].result else { panic!() };
    assert_eq!(v.matrix, vec![vec![1, 0], vec![0, 1]]);
    let EntryResult::MtInvariants(m) = &env.report.entries[1].result else { panic!() };
    assert!(m.order_f.is_one());
}

#[test]
fn every_entry_is_cited_from_the_table() {
    let cfg = fixture("bounds_quadratic_equality.toml");
    let (env, _) = json(&["bounds", "--config", cfg.to_str().unwrap()]);
    for e in &env.report.entries {
        assert_eq!(e.citation, cm_torus::citation::for_claim(&e.claim_id));
        assert_eq!(env.report.citations[&e.claim_id], e.citation);
    }
}

#[test]
fn report_round_trips_and_is_byte_stable() {
    let cfg = fixture("ring_phi5_n1.toml");
    let args = ["enumerate-mt", "--config", cfg.to_str().unwrap()];
    let (a, _) = json(&args);
    let (b, _) = json(&args);
    assert_eq!(a.report.to_json(), b.report.to_json());
    let text = a.to_json();
    let back: Envelope = serde_json::from_str(&text).unwrap();
    assert_eq!(back, a);
    assert_eq!(back.to_json(), text);
}

#[test]
fn thread_cap_does_not_change_results() {
    let cfg = fixture("ring_phi5_n2.toml");
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_cmtorus"))
            .args(["psi", "--config", cfg.to_str().unwrap(), "--format", "json"])
            .env("CMTORUS_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        serde_json::from_slice::<Envelope>(&out.stdout).unwrap().report
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = cmtorus(&["family", "--sweep", "3..13", "--format", "json", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let env: Envelope = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let last = env.report.entries.last().unwrap();
    assert_eq!(last.claim_id, "family-ratio");
    assert_eq!(last.status, Status::Ok);
}

#[test]
fn config_error_exit_code_and_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "[filtration]\nell = 3\nN = 5\nd = \"minus one\"\nk_max = 2\n").unwrap();
    let out = cmtorus(&["filtration", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.toml:4"), "{err}");

    let out = cmtorus(&["reflex"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn resource_cap_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.toml");
    std::fs::write(&path, "[ring]\nell = 3\nN = 9\nmodulus = [1, 0, 1]\ntau = [0, -1]\n").unwrap();
    let out = cmtorus(&["enumerate-mt", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn violated_membership_exit_code() {
    let text = std::fs::read_to_string(fixture("bounds_quadratic_equality.toml"))
        .unwrap()
        .replace("mt_order = 72", "mt_order = 1000");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wrong.toml");
    std::fs::write(&path, text).unwrap();
    let (env, code) = json(&["bounds", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(env.report.has_violation());
}

#[test]
fn selftest_reports_missing_fixtures_per_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let (env, code) = json(&["selftest", "--fixtures", dir.path().to_str().unwrap()]);
    assert_eq!(code, 3);
    let by_number = |n: u32| {
        env.report
            .entries
            .iter()
            .find_map(|e| match &e.result {
                EntryResult::Criterion(c) if c.number == n => Some(c.clone()),
                _ => None,
            })
            .unwrap()
    };
    // fixture-free criteria still pass
    assert!(by_number(1).passed && by_number(10).passed);
    let c = by_number(7);
    assert!(!c.passed);
    assert!(c.detail.contains("configuration error") && c.detail.contains("filtration_unramified.toml"), "{}", c.detail);
}
