//! Runs every acceptance criterion at its stated tolerance and time bound and
//! prints one line per criterion.

use std::time::Instant;

use metric_tree::suite::{run_criterion, run_paper_acceptance, Fixtures, CRITERIA};

const SEED: u64 = 42;

#[test]
fn paper_acceptance() {
    let fx = Fixtures::bundled();
    let mut failed = Vec::new();
    for &(id, _, _) in &CRITERIA[..13] {
        let r = run_criterion(id, &fx, SEED).expect("criterion runs");
        let ok = r.passed && r.within_time();
        println!(
            "{} ({:.2}s, limit {}s{})",
            r.line(),
            r.elapsed.as_secs_f64(),
            r.time_limit_secs,
            if r.within_time() { "" } else { ", OVER TIME" }
        );
        if !ok {
            failed.push(id);
        }
    }

    let start = Instant::now();
    let first = run_paper_acceptance(&fx, SEED).expect("suite runs");
    let first_time = start.elapsed();
    let second = run_paper_acceptance(&fx, SEED).expect("suite runs");
    let identical = first.to_text() == second.to_text();
    let within = first_time.as_secs_f64() < CRITERIA[13].2
        && second.wall_time.as_secs_f64() < CRITERIA[13].2;
    let ok = identical && within && first.all_passed();
    println!(
        "[{}] 14 determinism: two suite runs byte-identical {identical}, all criteria passed {} ({:.2}s and {:.2}s, limit {}s)",
        if ok { "PASS" } else { "FAIL" },
        first.all_passed(),
        first_time.as_secs_f64(),
        second.wall_time.as_secs_f64(),
        CRITERIA[13].2
    );
    if !ok {
        failed.push(14);
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
