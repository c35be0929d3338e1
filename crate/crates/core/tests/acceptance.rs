//! One line per acceptance criterion. Criterion 10 is known to fail: the
//! determinant normalization -1/64 contradicts the initial condition
//! C1(0) = I, which forces det C1(0) = 1. It is reported rather than hidden
//! and does not abort the workspace run; `dwork-zeta selftest` exits 1 on it.

use std::process::ExitCode;

use dwork_zeta::selftest::{run, CRITERIA};

const EXPECTED_FAILURES: &[(u8, &str)] =
    &[(10, "C1(0) = I forces det C1 = (1-l^4)^(-3/2); the -1/64 normalization is unattainable")];

fn main() -> ExitCode {
    let mut unexpected = 0;
    let mut passed = 0;
    for (id, _) in CRITERIA {
        let o = run(id);
        println!("{o}");
        match (o.passed, EXPECTED_FAILURES.iter().find(|e| e.0 == id)) {
            (true, _) => passed += 1,
            (false, Some((_, why))) => println!("               known failure: {why}"),
            (false, None) => unexpected += 1,
        }
    }
    println!("{passed}/{} criteria passed, {unexpected} unexpected failures", CRITERIA.len());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
