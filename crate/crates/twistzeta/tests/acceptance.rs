//! Runs the verification suite over the whole corpus and prints one line per
//! criterion. Run with `--nocapture` to see the lines.

use std::time::{Duration, Instant};

use twistzeta::corpus;
use twistzeta::verify::{criterion_summary, verify_entry, verify_global, VerifyOptions};

const CRITERIA: [&str; 8] = [
    "assembled twist zeta equals brute force within the time budget",
    "character tables are exact and the two engines agree",
    "twist induction is a bijection on every class",
    "C and T do not depend on the choices made",
    "Sylow reduction of T and Gamma",
    "f~ is constant on buckets and T equality matches them",
    "cohomology engines",
    "predicate A and the linearised T test",
];

const TOTAL_BUDGET: Duration = Duration::from_secs(300);

#[test]
fn acceptance() {
    let opts = VerifyOptions::default();
    let start = Instant::now();
    let entries: Vec<_> = corpus::all()
        .into_iter()
        .map(|e| verify_entry(e.name, e.group, e.normal, e.p, &opts).expect("verification runs"))
        .collect();
    let global = verify_global(&opts).expect("global checks run");
    let total = start.elapsed();

    let summary = criterion_summary(&entries, &global);
    let mut failed = Vec::new();
    for (criterion, passed, count) in &summary {
        let mut ok = *passed;
        if *criterion == 1 {
            ok &= total <= TOTAL_BUDGET;
        }
        println!(
            "criterion {} {}: {} ({} checks)",
            criterion,
            if ok { "PASS" } else { "FAIL" },
            CRITERIA[*criterion as usize - 1],
            count
        );
        if !ok {
            failed.push(*criterion);
        }
    }
    println!("corpus of {} entries verified in {:.2?}", entries.len(), total);
    for e in entries.iter().filter(|e| !e.passed()) {
        for c in e.checks.iter().filter(|c| !c.passed) {
            println!("  {} [{}] {}: {}", e.name, c.criterion, c.name, c.detail);
        }
    }
    for c in global.iter().filter(|c| !c.passed) {
        println!("  global [{}] {}: {}", c.criterion, c.name, c.detail);
    }
    assert_eq!(
        summary.iter().map(|s| s.0).collect::<Vec<_>>(),
        (1..=8).collect::<Vec<u8>>()
    );
    assert!(failed.is_empty(), "failing criteria: {:?}", failed);
}
