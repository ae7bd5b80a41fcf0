//! Runs criteria 1 to 14 in order and prints one PASS/FAIL line for each.
//! They run sequentially inside a single test so that the wall-clock
//! budgets are measured without competing threads.

use std::io::Write;

use nevbound::acceptance::{run_criterion, CRITERIA};

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    for c in CRITERIA {
        let out = run_criterion(c, 0);
        // straight to the handle, so the lines show without --nocapture
        writeln!(std::io::stdout(), "{}", out.line()).unwrap();
        if !out.pass {
            failed.push(out.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
