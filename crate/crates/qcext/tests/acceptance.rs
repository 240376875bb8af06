//! Acceptance criteria at full budget. Runs without the libtest harness so every
//! criterion prints its `PASS`/`FAIL` line, and exits nonzero if any fails.

use qcext::verify::criteria::*;
use qcext::verify::Budget;
use std::process::ExitCode;

const SEED: u64 = 20_240_601;

fn tolerances_are_pinned() {
    let b = Budget::default();
    assert_eq!((b.cases, b.triples, b.grid), (10_000, 100_000, 1024));
    assert_eq!(C1_WINDOW, 20.0);
    assert_eq!(C1_QC_TOL, 1e-9);
    assert_eq!(C2_HAUSDORFF_STEPS, 5.0);
    assert_eq!(C2_HALF_DISK_TOL, 1e-6);
    assert_eq!(C2_PROBES, 16);
    assert_eq!(C3_WINDOW, 50.0);
    assert_eq!(C3_LEVELS, 16_384);
    assert_eq!(C3_DOWN_LEVELS, 64);
    assert_eq!(C4_K_MAX, 20);
    assert_eq!(C4_RATIO, (1.8, 2.2));
    assert_eq!(C4_RATIO_FROM, 12);
    assert_eq!(C4_PRODUCT_MAX, 1e-4);
    assert_eq!(C5_K_MAX, 64);
    assert_eq!(C5_GAP_MAX, 0.05);
    assert_eq!(C5_BETA_MIN, 0.5);
    assert_eq!(C8_MIN_EXCESS, 0.2);
    assert_eq!(GRID_MIN, 1024);
}

fn main() -> ExitCode {
    tolerances_are_pinned();
    println!("PASS tolerances pinned");
    let budget = Budget::default();
    let criteria: [fn(u64, &Budget) -> CriterionOutcome; 8] =
        [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8];
    let mut failed = 0;
    for c in criteria {
        let out = c(SEED, &budget);
        println!("{}", out.line());
        failed += usize::from(!out.passed);
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
