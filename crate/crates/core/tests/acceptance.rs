//! The project's acceptance checklist, run end to end. Each of the 13
//! criteria prints exactly one PASS/FAIL line (visible with
//! `cargo test --test acceptance -- --nocapture`); a failing criterion
//! also lists every individual check that missed, then fails the test.

use gauss_spectral::verify::run_all;
use gauss_spectral::DEFAULT_TOL;

#[test]
fn acceptance() {
    let results = run_all(DEFAULT_TOL, 42);
    assert_eq!(results.len(), 13, "the checklist has 13 criteria");
    let mut failed = Vec::new();
    for r in &results {
        println!(
            "criterion {:>2} [{}] {}",
            r.index,
            if r.pass { "PASS" } else { "FAIL" },
            r.name
        );
        if !r.pass {
            for c in r.checks.iter().filter(|c| !c.pass) {
                println!(
                    "    missed: {} (lhs {:.12e}, rhs {:.12e}, slack {:.3e})",
                    c.name, c.lhs, c.rhs, c.slack
                );
            }
            failed.push(r.index);
        }
    }
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
