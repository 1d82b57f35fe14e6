mod common;

use applicative::driver::{render_text, run, RunReport, RunRequest, Selection};
use applicative::ski::SkiMode;

#[test]
fn corpus_is_large_enough() {
    assert!(common::corpus().len() >= 20);
}

#[test]
fn every_corpus_program_agrees_under_all_backends() {
    for (name, src) in common::corpus() {
        for mode in [SkiMode::Naive, SkiMode::Optimized] {
            let mut req = RunRequest::new(src.clone(), Selection::All);
            req.ski_mode = mode;
            let report = run(&req).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(report.agreement, Some(true), "{name}\n{}", render_text(&report));
            assert_eq!(report.exit_code(), 0, "{name}");
            assert!(report.backends.iter().all(|b| b.int_result().is_some()), "{name}");
        }
    }
}

#[test]
fn json_reports_round_trip_to_identical_text() {
    for (name, src) in common::corpus() {
        for trace in [false, true] {
            let mut req = RunRequest::new(src.clone(), Selection::All);
            req.trace = trace;
            let report = run(&req).unwrap();
            let back = RunReport::from_json(&report.to_json()).unwrap();
            assert_eq!(render_text(&back), render_text(&report), "{name}");
        }
    }
}
