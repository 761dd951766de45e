//! Acceptance criteria, one line per criterion. Runs without the test harness so the
//! report is always printed; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use fracdiff::verification::suites::{self, Check};

type Criterion = (&'static str, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("1", suites::table_reproduction),
        ("2", suites::coefficient_sum_identity),
        ("3", suites::oracle_equivalence),
        ("4", suites::ftcs_limit),
        ("5", suites::gaussian_solution),
        ("6", suites::cauchy_solution),
        ("7", suites::mass_conservation),
        ("8", suites::upwind_limit),
        ("9", suites::sigma_cross_check),
        ("10", suites::stability_bound_consistency),
        ("S", suites::boundary_driven_smoke),
    ];
    let mut failed = 0;
    for (id, f) in criteria {
        let start = Instant::now();
        let c = f();
        assert_eq!(c.id, id);
        println!("{c} [{:.2}s]", start.elapsed().as_secs_f64());
        if !c.passed {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
