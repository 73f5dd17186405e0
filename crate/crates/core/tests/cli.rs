use std::path::Path;
use std::process::{Command, Output};

const FIX: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

fn flowspec(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flowspec"))
        .args(args)
        .current_dir(dir)
        .env_remove("FLOWSPEC_STYLE")
        .output()
        .unwrap()
}

fn fx(name: &str) -> String {
    format!("{FIX}/{name}")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn compile_prints_the_sequence_scenario() {
    let tmp = tempfile::tempdir().unwrap();
    let o = flowspec(tmp.path(), &["compile", &fx("m1.pml")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("  GIVEN S1\n  WHEN ev1\n  THEN a1\n"), "{text}");
}

#[test]
fn xml_and_dsl_models_compile_identically() {
    let tmp = tempfile::tempdir().unwrap();
    for i in 1..=9 {
        let a = flowspec(tmp.path(), &["compile", "--mode", "strict", &fx(&format!("m{i}.pml"))]);
        let b = flowspec(tmp.path(), &["compile", "--mode", "strict", &fx(&format!("m{i}.xml"))]);
        assert_eq!(a.stdout, b.stdout, "m{i}");
    }
}

#[test]
fn style_comes_from_the_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_flowspec"))
        .args(["compile", &fx("m1.pml")])
        .env("FLOWSPEC_STYLE", "gherkin")
        .current_dir(tmp.path())
        .output()
        .unwrap();
    assert!(stdout(&o).contains("  Given S1\n"));
}

#[test]
fn check_passes_then_fails_on_a_mutated_then() {
    let tmp = tempfile::tempdir().unwrap();
    let ok = flowspec(tmp.path(), &["check", &fx("m9.pml"), &fx("m9_rows.feature")]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(stdout(&ok).contains("coverage 1.000 uncovered []"));

    let feature = std::fs::read_to_string(fx("m9_rows.feature")).unwrap().replace("THEN a10 AND", "THEN a99 AND");
    std::fs::write(tmp.path().join("bad.feature"), feature).unwrap();
    let bad = flowspec(tmp.path(), &["check", &fx("m9.pml"), "bad.feature"]);
    assert_eq!(bad.status.code(), Some(1));
    let text = stdout(&bad);
    assert!(text.contains("FAIL bad.feature: embedded 2"), "{text}");
    assert!(text.contains("uncovered [t4]"), "{text}");
}

#[test]
fn json_report_shape() {
    let tmp = tempfile::tempdir().unwrap();
    let o = flowspec(tmp.path(), &["check", &fx("m9.pml"), &fx("m9_rows.feature"), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["coverage"], 1.0);
    assert_eq!(v["uncovered"].as_array().unwrap().len(), 0);
    let verdicts = v["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 8);
    assert_eq!(verdicts[0]["scenario"], "entry");
    assert!(verdicts[0]["feature"].as_str().unwrap().ends_with("m9_rows.feature"));

    let o = flowspec(tmp.path(), &["check", &fx("m9.pml"), &fx("m9_rows.feature"), "--json", "report.json"]);
    assert!(o.stdout.is_empty());
    let written: serde_json::Value = serde_json::from_slice(&std::fs::read(tmp.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(written, v);
}

#[test]
fn steps_reproduce_the_reference_skeletons() {
    let tmp = tempfile::tempdir().unwrap();
    let o = flowspec(tmp.path(), &["steps", &fx("sample.feature")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim_end(), std::fs::read_to_string(fx("sample.skeletons.json")).unwrap().trim_end());
}

#[test]
fn reverse_writes_model_and_graph() {
    let tmp = tempfile::tempdir().unwrap();
    let o = flowspec(tmp.path(), &["reverse", &fx("m9_rows.feature"), "--dot", "m.dot", "--model-out", "m.xml"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let dot = std::fs::read_to_string(tmp.path().join("m.dot")).unwrap();
    assert!(dot.starts_with("digraph"));
    let xml = std::fs::read_to_string(tmp.path().join("m.xml")).unwrap();
    let m = flowspec::parse_xml(&xml).unwrap();
    assert_eq!(m.transitions.len(), 7);
}

#[test]
fn lint_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let o = flowspec(tmp.path(), &["lint", &fx("m4.pml")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("OverlappingGuards"));
    assert_eq!(flowspec(tmp.path(), &["lint", &fx("m1.pml")]).status.code(), Some(0));
}

#[test]
fn input_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("broken.pml"), "process \"x\" { state }").unwrap();
    for args in [
        vec!["frobnicate"],
        vec!["compile", "missing.pml"],
        vec!["compile", "broken.pml"],
        vec!["render", "--format", "xml", "broken.pml"],
    ] {
        let o = flowspec(tmp.path(), &args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn in_process_run_matches_binary() {
    let tmp = tempfile::tempdir().unwrap();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = flowspec::cli::run(["flowspec", "render", &fx("m9.pml")], &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(out, flowspec(tmp.path(), &["render", &fx("m9.pml")]).stdout);
}
