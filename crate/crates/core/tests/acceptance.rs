//! Acceptance suite: one test per criterion, exact equality throughout,
//! each printing its pass/fail line (run with `--nocapture` to see them).

use localtr::check::{self, CheckResult};

const SEED: u64 = 0x1ea_f00d;

fn assert_criterion(result: CheckResult) {
    println!("{}", result.line());
    assert!(result.passed, "{}", result.line());
}

#[test]
fn criterion_1_airy_golden_values() {
    assert_criterion(check::criterion_airy_golden());
}

#[test]
fn criterion_2_kdv_lemma() {
    assert_criterion(check::criterion_kdv_lemma(SEED));
}

#[test]
fn criterion_3_graph_sum_theorem() {
    assert_criterion(check::criterion_graph_sum(SEED));
}

#[test]
fn criterion_4_dictionary_round_trip() {
    assert_criterion(check::criterion_dictionary(SEED));
}

#[test]
fn criterion_5_main_theorem() {
    assert_criterion(check::criterion_main_theorem(SEED));
}

#[test]
fn criterion_6_cp1_f_matrix() {
    assert_criterion(check::criterion_f_matrix());
}

#[test]
fn criterion_7_cp1_residue_coefficients() {
    assert_criterion(check::criterion_u_residues());
}

#[test]
fn criterion_8_norbury_scott_theorem() {
    assert_criterion(check::criterion_norbury_scott());
}

#[test]
fn criterion_9_property_suites() {
    assert_criterion(check::criterion_properties(SEED));
}
