//! Runs every acceptance criterion and prints one line per criterion.
//! Exits nonzero if any criterion fails.

use cm_torus_cli::selftest::{run_all, FixtureSource, Harness};

fn main() {
    let fixtures = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let outcomes = run_all(&Harness::new(FixtureSource::Directory(fixtures)));
    println!();
    for o in &outcomes {
        println!("{}", o.line());
        if !o.passed {
            println!("             {}", o.detail);
        }
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("\n{} passed, {failed} failed\n", outcomes.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
