//! Runs every acceptance criterion at its stated size and tolerance and prints
//! one PASS/FAIL line per criterion.

use std::time::Instant;

use rankzeta::checks::{run_criterion, CheckConfig, Criterion};

#[test]
fn acceptance() {
    let cfg = CheckConfig::default();
    let mut failed = Vec::new();
    for c in Criterion::ALL {
        let start = Instant::now();
        let line = match run_criterion(c, &cfg) {
            Ok(r) => {
                if !r.pass {
                    failed.push(c);
                }
                format!("{} {} {}: {}", if r.pass { "PASS" } else { "FAIL" }, r.number, c, r.summary)
            }
            Err(e) => {
                failed.push(c);
                format!("FAIL {} {}: error: {e}", c.number(), c)
            }
        };
        println!("{line} [{:.1}s]", start.elapsed().as_secs_f64());
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
