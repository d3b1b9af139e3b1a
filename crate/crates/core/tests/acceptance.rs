//! One PASS/FAIL line per acceptance criterion.
//!
//! Criteria are run by the library census; the assertions here only read
//! the reports. Run with `cargo test --release --test acceptance -- --nocapture`
//! to see the lines.

use roach_core::census::{run_one, CriterionReport, Mutation};

fn criterion(number: usize, id: &'static str) -> CriterionReport {
    let report = run_one(id, Mutation::None);
    let verdict = if report.passed { "PASS" } else { "FAIL" };
    println!(
        "{verdict} criterion {number} [{id}]: {} cases, {} failures, {} ms",
        report.checked, report.failure_count, report.elapsed_ms
    );
    for f in &report.failures {
        println!("    {f}");
    }
    report
}

fn assert_passes(number: usize, id: &'static str) {
    let report = criterion(number, id);
    assert!(report.passed, "criterion {number} [{id}] failed: {:#?}", report.failures);
}

#[test]
fn criterion_01_char_r2_census() {
    assert_passes(1, "char-R2");
}

#[test]
fn criterion_02_fine_jankov_contract() {
    assert_passes(2, "fine-jankov");
}

#[test]
fn criterion_03_minimal_forbidden_witnesses() {
    assert_passes(3, "minimality");
}

#[test]
fn criterion_04_unraveling_into_willow_trees() {
    assert_passes(4, "unraveling");
}

#[test]
fn criterion_05_closure_under_subframes_and_images() {
    assert_passes(5, "closure");
}

#[test]
fn criterion_06_hierarchy_witnesses() {
    assert_passes(6, "hierarchy");
}

#[test]
fn criterion_07_bd_depth_and_s412_correspondence() {
    assert_passes(7, "bd-depth");
}

#[test]
fn criterion_08_decision_spot_checks() {
    assert_passes(8, "decide");
}

#[test]
fn criterion_09_ordinal_golden_table() {
    assert_passes(9, "ordinal-table");
}

#[test]
fn criterion_10_cnf_reconstruction() {
    assert_passes(10, "cnf-reconstruction");
}
