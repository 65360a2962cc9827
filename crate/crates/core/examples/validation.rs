//! Runs the invariant suites and prints the largest deviation of each.

use flyqubit::validate::run_suites;

pub fn run_example() -> flyqubit::Result<()> {
    let report = run_suites()?;
    for s in &report.suites {
        println!(
            "{:<28} {:>4} cases  max error {:.2e}  (tol {:.0e})  {}",
            s.name,
            s.cases,
            s.max_error,
            s.tolerance,
            if s.passed { "ok" } else { "FAILED" }
        );
    }
    assert!(report.passed);
    Ok(())
}

fn main() -> flyqubit::Result<()> {
    run_example()
}
