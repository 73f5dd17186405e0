use std::collections::BTreeSet;

use flowspec::corpus::fixture;
use flowspec::ident::id;
use flowspec::replay::{explore, ReplayError};
use flowspec::*;

fn set(xs: &[&str]) -> BTreeSet<Ident> {
    xs.iter().map(|x| id(x)).collect()
}

fn names(v: &[Ident]) -> Vec<&str> {
    v.iter().map(Ident::as_str).collect()
}

#[test]
fn m9_entry_exit_traces() {
    let m = fixture("m9");
    let start = Configuration::initial(&m);
    let s1 = step(&m, &start, &set(&["ev1"]), &set(&[])).unwrap();
    assert_eq!(names(&s1.trace), ["a1", "a2"]);
    assert_eq!(names(&s1.after.leaves()), ["S1"]);
    let s2 = step(&m, &s1.after, &set(&["ev2"]), &set(&[])).unwrap();
    assert_eq!(names(&s2.trace), ["a3", "a4", "a5", "a6"]);
    assert_eq!(names(&s2.after.leaves()), ["S2", "S3"]);
}

#[test]
fn entering_a_composite_lands_on_its_initial_child() {
    let m = fixture("m9");
    let cfg = Configuration::from_states(&m, &[id("S5")]).unwrap();
    let r = step(&m, &cfg, &set(&["ev7"]), &set(&[])).unwrap();
    assert_eq!(names(&r.after.leaves()), ["S6.1"]);
    assert!(r.after.is_active(&id("S6")));
}

#[test]
fn unmatched_stimulus_fires_nothing() {
    let m = fixture("m1");
    let r = step(&m, &Configuration::initial(&m), &set(&["ev1"]), &set(&[])).unwrap();
    assert!(r.fired.is_empty());
    assert_eq!(r.after, Configuration::initial(&m));
}

#[test]
fn explore_counts_paths() {
    assert_eq!(explore(&fixture("m1"), 2).len(), 1);
    // setup, then one of the three nonempty or-split branch sets
    assert_eq!(explore(&fixture("m6"), 2).len(), 3);
    assert!(explore(&fixture("m1"), 0).is_empty());
}

#[test]
fn competing_transitions_conflict() {
    let m = parse_dsl("process \"c\" { state S1 state S2 state S3 trans t1 { from S1 on e to S2 } trans t2 { from S1 on e to S3 } }").unwrap();
    let cfg = Configuration::from_states(&m, &[id("S1")]).unwrap();
    let err = step(&m, &cfg, &set(&["e"]), &set(&[])).unwrap_err();
    assert!(matches!(err, ReplayError::NondeterminismConflict { .. }), "{err}");
}

#[test]
fn guards_select_the_branch() {
    let m = fixture("m4");
    let cfg = Configuration::from_states(&m, &[id("S1")]).unwrap();
    let r = step(&m, &cfg, &set(&[]), &set(&["g2"])).unwrap();
    assert_eq!(names(&r.fired), ["t2"]);
    assert_eq!(names(&r.trace), ["a2"]);
}

#[test]
fn strict_suite_of_every_fixture_passes_with_full_coverage() {
    for (name, m) in corpus::fixtures() {
        let doc = emit_feature(&m, Mode::Strict).unwrap();
        let r = check_suite(&m, &doc, Mode::Strict);
        assert!(r.passed, "{name}");
        assert_eq!(r.coverage, 1.0, "{name}: {:?}", r.uncovered);
    }
}

#[test]
fn wrong_then_fails_with_a_positioned_mismatch() {
    let m = fixture("m1");
    let doc = parse_feature("Feature: f\n  Scenario: s\n    GIVEN S1\n    WHEN ev1\n    THEN a9 AND S2\n").unwrap();
    let v = replay_scenario(&m, &doc.scenarios[0], Mode::Strict).unwrap();
    assert!(!v.passed);
    assert_eq!(v.mismatches[0].position, 0);
    assert_eq!(v.mismatches[0].expected.as_deref(), Some("a9"));
    assert_eq!(v.mismatches[0].observed.as_deref(), Some("a1"));
}

#[test]
fn paper_exact_accepts_actions_in_any_group_order() {
    let m = fixture("m9");
    let doc = parse_feature("Feature: f\n  Scenario: s\n    GIVEN S1\n    WHEN ev2\n    THEN a6 AND a5 AND S2\n").unwrap();
    assert!(replay_scenario(&m, &doc.scenarios[0], Mode::PaperExact).unwrap().passed);
    assert!(!replay_scenario(&m, &doc.scenarios[0], Mode::Strict).unwrap().passed);
}

#[test]
fn empty_model_is_fully_covered() {
    let m = parse_dsl("process \"e\" { state S1 }").unwrap();
    let r = check_suite(&m, &FeatureDoc::default(), Mode::Strict);
    assert!(r.passed);
    assert_eq!(r.coverage, 1.0);
}
