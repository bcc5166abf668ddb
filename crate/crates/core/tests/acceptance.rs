//! Acceptance suite: one test per criterion, each at its pinned scale.
//! Every test prints its report line; run with `--nocapture` to see the
//! lines for passing criteria too.
//!
//! The heavyweight criteria stream a multi-million formula corpus; build
//! with optimizations (the workspace test profile already does).

use ruitenburg::suite::{run_criterion, SuiteConfig};

fn check(id: u8) {
    let cfg = SuiteConfig::default();
    let outcome = run_criterion(id, &cfg);
    println!("{}", outcome);
    assert!(outcome.passed, "{}", outcome);
}

#[test]
fn criterion_01_index_period() {
    check(1);
}

#[test]
fn criterion_02_classical_case() {
    check(2);
}

#[test]
fn criterion_03_glivenko() {
    check(3);
}

#[test]
fn criterion_04_index_from_height() {
    check(4);
}

#[test]
fn criterion_05_frontier_lemma() {
    check(5);
}

#[test]
fn criterion_06_b_index() {
    check(6);
}

#[test]
fn criterion_07_degree_correspondence() {
    check(7);
}

#[test]
fn criterion_08_duality_bridge() {
    check(8);
}

#[test]
fn criterion_09_ladder() {
    check(9);
}

#[test]
fn criterion_10_period_bounds() {
    check(10);
}

#[test]
fn criterion_11_duality_lite() {
    check(11);
}

#[test]
fn criterion_12_oracle_agreement() {
    check(12);
}
