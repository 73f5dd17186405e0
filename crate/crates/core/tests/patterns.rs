use flowspec::corpus::fixture;
use flowspec::ident::id;
use flowspec::model::PatternKind::*;
use flowspec::*;

#[test]
fn fixtures_classify_as_their_pattern() {
    let cases = [
        ("m1", "t1", Sequence),
        ("m2", "t1", ParallelSplit),
        ("m3", "t1", Synchronization),
        ("m4", "t1", ExclusiveChoice),
        ("m4", "t2", ExclusiveChoice),
        ("m5", "t1", SimpleMerge),
        ("m6", "t1", MultipleChoice),
        ("m7", "t1", SynchronizeMerge),
        ("m8", "t1", MultipleMerge),
        ("m9", "t2", ParallelSplit),
        ("m9", "t4", Sequence),
    ];
    for (name, t, want) in cases {
        let c = classify(&fixture(name));
        assert_eq!(c.kind_of(&id(t)), Some(want), "{name} {t}");
    }
}

#[test]
fn state_level_cases() {
    let c = classify(&fixture("m9"));
    let cases: Vec<(PatternKind, &str)> = c.states.iter().map(|s| (s.kind, s.state.as_str())).collect();
    assert_eq!(cases, [(EntryExitCase, "S1"), (EmbeddedStates, "S6")]);
}

#[test]
fn and_join_without_or_split_is_plain_synchronization() {
    let m = parse_dsl("process \"p\" { state S1 state S2 state S3 trans t1 { from S1 on e1, S2 on e2 join and to S3 } }").unwrap();
    assert_eq!(classify(&m).kind_of(&id("t1")), Some(Synchronization));
}

#[test]
fn pattern_names_round_trip() {
    for k in PatternKind::ALL {
        assert_eq!(PatternKind::from_name(k.name()), Some(k));
    }
}

#[test]
fn disjoint_guards_are_not_flagged() {
    let m = parse_dsl("process \"p\" { state S1 state S2 trans setup { from alpha on i to S1 } trans t1 { from S1 if g to S2 } trans t2 { from S1 if not g to S2 } }").unwrap();
    assert!(lint(&m).iter().all(|d| d.code != DiagCode::OverlappingGuards));
}

#[test]
fn unreachable_state_is_reported() {
    let codes: Vec<DiagCode> = lint(&fixture("m9")).iter().map(|d| d.code).collect();
    assert!(codes.contains(&DiagCode::UnreachableState));
}
