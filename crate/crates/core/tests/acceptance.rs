//! One test per acceptance criterion, run with the fixed default seed.
//! Each prints a single pass/fail line and checks the verdict and the
//! runtime budget.

use std::time::{Duration, Instant};

use tree_games::suite::{Suite, DEFAULT_SEED};

fn criterion(id: usize, budget_secs: u64) {
    let suite = Suite::default();
    let c = suite.get(id).expect("registered criterion");
    let start = Instant::now();
    let r = c.run(DEFAULT_SEED);
    let took = start.elapsed();
    let in_time = took <= Duration::from_secs(budget_secs);
    let verdict = if r.passed && in_time { "PASS" } else { "FAIL" };
    println!(
        "[{verdict}] criterion {id} {}: {} ({:.2}s of {budget_secs}s)",
        r.name,
        r.detail,
        took.as_secs_f64()
    );
    assert!(r.passed, "criterion {id} failed: {}", r.detail);
    assert!(in_time, "criterion {id} exceeded {budget_secs}s");
}

#[test]
fn criterion_1_parity_oracle() {
    criterion(1, 60);
}

#[test]
fn criterion_2_size_bound() {
    criterion(2, 10);
}

#[test]
fn criterion_3_cross_pipeline() {
    criterion(3, 300);
}

#[test]
fn criterion_4_matching_pennies() {
    criterion(4, 60);
}

#[test]
fn criterion_5_four_vertex_arena() {
    criterion(5, 5);
}

#[test]
fn criterion_6_hash_preimage() {
    criterion(6, 60);
}

#[test]
fn criterion_7_transducer_chains() {
    criterion(7, 60);
}

#[test]
fn criterion_8_confluence() {
    criterion(8, 30);
}

#[test]
fn criterion_9_safety_games() {
    criterion(9, 60);
}
