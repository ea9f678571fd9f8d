//! End-to-end acceptance gate. Runs every criterion against the built binary
//! and prints one status line per criterion so failures are easy to localize.

use std::path::Path;

#[test]
fn acceptance_suite() {
    let exe = Path::new(env!("CARGO_BIN_EXE_hecke"));
    let outcomes = hecke_core::accept::run_all(Some(exe));
    let mut failures = Vec::new();
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("{status} {:2} {} ({} ms): {}", o.index, o.name, o.millis, o.detail);
        if !o.passed {
            failures.push(format!("criterion {} ({}): {}", o.index, o.name, o.detail));
        }
    }
    assert!(
        failures.is_empty(),
        "{} acceptance criteria failed:\n{}",
        failures.len(),
        failures.join("\n")
    );
}
