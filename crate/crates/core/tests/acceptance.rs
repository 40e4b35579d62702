//! End-to-end acceptance: each criterion runs one oracle check at its nominal size and
//! prints a single PASS/FAIL line.

use std::io::Write;
use std::time::{Duration, Instant};

use catlogic::oracle::{run_check, DEFAULT_BUDGET};
use catlogic::report::CheckReport;

const SEED: u64 = 0;

/// Writes past the test harness's output capture, so the verdict lines always show.
macro_rules! say {
    ($($t:tt)*) => {{
        let _ = writeln!(std::io::stderr(), $($t)*);
    }};
}

fn stat(r: &CheckReport, name: &str) -> usize {
    r.stats.iter().find(|(k, _)| k == name).map(|(_, v)| *v).unwrap_or(0)
}

/// Runs `id`, prints the verdict line, then asserts agreement, minimum size and time.
fn criterion(n: usize, id: &str, min_instances: usize, limit: Option<Duration>) -> CheckReport {
    let start = Instant::now();
    let r = run_check(id, SEED, DEFAULT_BUDGET).expect("known check");
    let elapsed = start.elapsed();
    let in_time = limit.map_or(true, |l| elapsed <= l);
    let ok = r.passed && r.instances >= min_instances && in_time;
    say!(
        "{} criterion {n:>2} {id}: {}/{} agree, {} failures, {:.1?}",
        if ok { "PASS" } else { "FAIL" },
        r.agreements,
        r.instances,
        r.failure_count,
        elapsed
    );
    for f in &r.failures {
        say!("    {}\n    replay: {}", f.detail, f.replay);
    }
    assert!(r.passed, "{id}: {} failures", r.failure_count);
    assert!(r.instances >= min_instances, "{id}: {} instances, need {min_instances}", r.instances);
    assert!(in_time, "{id}: took {elapsed:?}, limit {limit:?}");
    r
}

#[test]
fn c01_classifier_matches_definitions() {
    criterion(1, "exactness", 200, Some(Duration::from_secs(60)));
}

#[test]
fn c02_lattice_completion() {
    let r = criterion(2, "completion", 10, Some(Duration::from_secs(120)));
    assert_eq!(r.instances, 10, "lattices with at most five elements");
}

#[test]
fn c03_regular_objects() {
    let r = criterion(3, "regular-objects", 1, None);
    assert!(stat(&r, "regular") > 0);
}

#[test]
fn c04_lex_functors_are_subterminal() {
    criterion(4, "subterminal", 1, None);
}

#[test]
fn c05_sheaf_criterion() {
    let r = criterion(5, "sheaf", 500, None);
    say!(
        "    sites with a missing pushout: {} pairs, {} divergent",
        stat(&r, "pairs_on_sites_with_gaps"),
        stat(&r, "divergent_on_sites_with_gaps")
    );
}

#[test]
fn c06_subcanonical() {
    let r = criterion(6, "subcanonical", 1, None);
    assert!(stat(&r, "categories") > 0);
}

#[test]
fn c07_points_are_filters() {
    let r = criterion(7, "points", 10, None);
    assert_eq!(r.instances, 10);
}

#[test]
fn c08_pp_implication() {
    criterion(8, "pp-implies", 3000, Some(Duration::from_secs(600)));
}

#[test]
fn c09_definable_class_closure() {
    // 20 theories and one negative control per ring
    criterion(9, "defclass", 63, None);
}

#[test]
fn c10_reduced_products() {
    criterion(10, "reduced-product", 1, None);
}

#[test]
fn c11_evaluation_exactness() {
    criterion(11, "ev-exact", 600, None);
}

#[test]
fn c12_representable_covers() {
    criterion(12, "covers", 600, None);
}

#[test]
fn c13_injectivity_theories() {
    let graphs = catlogic::gen::digraphs(3).len();
    criterion(13, "injectivity", 50 * graphs, None);
}

#[test]
fn c14_pp_normal_form() {
    criterion(14, "pp-normal", 200, None);
}
