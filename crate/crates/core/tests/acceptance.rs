//! Acceptance criteria 1-8. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, UnwindSafe};
use std::process::Command;

use flowspec::corpus::{self, GenLimits};
use flowspec::feature::{FeatureDoc, Scenario};
use flowspec::iso::iso_difference;
use flowspec::replay::replay_scenario;
use flowspec::skeleton::skeletons_json;
use flowspec::*;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const RANDOM_MODELS: u64 = 200;

fn corpus_models() -> Vec<(String, ProcessModel)> {
    let mut v: Vec<(String, ProcessModel)> = corpus::fixtures().into_iter().map(|(n, m)| (n.to_string(), m)).collect();
    for seed in 0..RANDOM_MODELS {
        v.push((format!("random#{seed}"), corpus::random_model(seed, GenLimits::default())));
    }
    v
}

fn strict_text(m: &ProcessModel) -> String {
    format_feature(&emit_feature(m, Mode::Strict).expect("emit"), Style::PaperUpper)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Clause lines per scenario, whitespace-normalized.
fn blocks_of_text(text: &str) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = Vec::new();
    let mut cur: Vec<String> = Vec::new();
    for line in text.lines() {
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.first() {
            Some(&("GIVEN" | "WHEN" | "THEN")) => cur.push(words.join(" ")),
            _ => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn transition_of(sc: &Scenario) -> &str {
    sc.name.split(' ').nth(1).unwrap_or("")
}

fn emitted_blocks(m: &ProcessModel, ids: &[&str]) -> Vec<Vec<String>> {
    let doc = emit_feature(m, Mode::PaperExact).expect("emit");
    let only = FeatureDoc {
        scenarios: doc.scenarios.iter().filter(|s| ids.contains(&transition_of(s))).cloned().collect(),
        ..FeatureDoc::default()
    };
    blocks_of_text(&format_feature(&only, Style::PaperUpper))
}

fn golden(n: usize) -> String {
    let text = std::fs::read_to_string(format!("{}/fixtures/golden/m{n}.txt", env!("CARGO_MANIFEST_DIR"))).expect("golden");
    if n == 6 {
        // documented errata: the second and third scenarios leave S1, and
        // the last one needs both guards
        text.replace("GIVEN S2", "GIVEN S1").replace("g1 AND g1", "g1 AND g2")
    } else {
        text
    }
}

fn c1_golden() -> Outcome {
    let cases: [(&str, usize, &[&str]); 8] = [
        ("m1", 1, &["t1"]),
        ("m2", 2, &["t1"]),
        ("m3", 3, &["t1"]),
        ("m4", 4, &["t1", "t2"]),
        ("m5", 5, &["t1"]),
        ("m6", 6, &["t1"]),
        ("m7", 7, &["t1"]),
        ("m8", 8, &["t1"]),
    ];
    for (name, code, ids) in cases {
        let got = emitted_blocks(&corpus::fixture(name), ids);
        let want = blocks_of_text(&golden(code));
        ensure(got == want, || format!("{name} vs golden m{code}: got {got:?}, want {want:?}"))?;
    }
    let m9 = emit_feature(&corpus::fixture("m9"), Mode::PaperExact).expect("emit");
    let rows: Vec<String> = blocks_of_text(&format_feature(&m9, Style::PaperUpper)).into_iter().map(|b| b.join(" ")).collect();
    let rows_text = include_str!("../fixtures/golden/m9_rows.txt");
    let want: Vec<String> = rows_text.lines().map(|l| l.split_whitespace().collect::<Vec<_>>().join(" ")).collect();
    ensure(rows == want, || format!("M9 vs golden rows: got {rows:?}"))?;
    Ok(format!("M1-M8 listings and {} M9 rows", want.len()))
}

fn c2_skeletons() -> Outcome {
    let doc = parse_feature(include_str!("../fixtures/sample.feature")).map_err(|e| e.to_string())?;
    let sk = emit_skeletons(&doc).map_err(|e| e.to_string())?;
    let got = skeletons_json(&sk);
    let want = include_str!("../fixtures/sample.skeletons.json");
    ensure(got.trim_end() == want.trim_end(), || format!("got {got}"))?;
    ensure(sk.len() == 3, || format!("{} skeletons", sk.len()))?;
    for (s, step) in sk.iter().zip(skeleton::document_steps(&doc)) {
        let line = format!("{} {}", step.0, step.1);
        ensure(s.regex().is_match(&line), || format!("{} does not match `{line}`", s.pattern))?;
    }
    Ok("3 skeletons, patterns match their steps".into())
}

fn c3_round_trip() -> Outcome {
    let models = corpus_models();
    for (name, m) in &models {
        let text = strict_text(m);
        let doc = parse_feature(&text).map_err(|e| format!("{name}: reparse: {e}"))?;
        let (back, diags) = infer_model(&doc, &InferenceHints::default());
        let errors: Vec<String> = diags.iter().filter(|d| d.is_error()).map(|d| d.to_string()).collect();
        ensure(errors.is_empty(), || format!("{name}: inference errors {errors:?}"))?;
        if let Some(d) = iso_difference(m, &back) {
            return Err(format!("{name}: not isomorphic: {d}"));
        }
        ensure(strict_text(&back) == text, || format!("{name}: re-emitted text differs"))?;
    }
    Ok(format!("{} models", models.len()))
}

/// One random edit of a THEN clause that a correct replay must reject.
fn mutate(sc: &Scenario, m: &ProcessModel, rng: &mut ChaCha8Rng) -> Option<(String, Scenario)> {
    let paths: Vec<Ident> = m.state_paths().into_iter().map(|(p, _)| p).collect();
    let mut edits: Vec<(String, Scenario)> = Vec::new();
    for (i, item) in sc.then.iter().enumerate() {
        let mut dropped = sc.clone();
        dropped.then.remove(i);
        edits.push((format!("drop item {i}"), dropped));
        match item {
            ThenItem::ActionSeq(v) => {
                for k in 0..v.len() {
                    let mut s = sc.clone();
                    if let ThenItem::ActionSeq(w) = &mut s.then[i] {
                        w[k] = ident::id("zz_mutant");
                    }
                    edits.push((format!("rename action {}", v[k]), s));
                    if k + 1 < v.len() && v[k] != v[k + 1] {
                        let mut s = sc.clone();
                        if let ThenItem::ActionSeq(w) = &mut s.then[i] {
                            w.swap(k, k + 1);
                        }
                        edits.push((format!("swap {} and {}", v[k], v[k + 1]), s));
                    }
                }
            }
            ThenItem::StateTerm(st) => {
                let leaf = m.default_leaf(st);
                for p in paths.iter().filter(|p| m.default_leaf(p) != leaf) {
                    let mut s = sc.clone();
                    s.then[i] = ThenItem::StateTerm(p.clone());
                    edits.push((format!("state {st} -> {p}"), s));
                }
            }
        }
    }
    edits.choose(rng).cloned()
}

fn c4_strict_replay() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut scenarios, mut mutants) = (0, 0);
    for (name, m) in corpus_models() {
        let doc = emit_feature(&m, Mode::Strict).map_err(|e| format!("{name}: {e}"))?;
        let r = check_suite(&m, &doc, Mode::Strict);
        ensure(r.passed, || format!("{name}: strict replay failed"))?;
        ensure(r.coverage == 1.0, || format!("{name}: coverage {} uncovered {:?}", r.coverage, r.uncovered))?;
        scenarios += doc.scenarios.len();
        for sc in &doc.scenarios {
            let Some((what, bad)) = mutate(sc, &m, &mut rng) else { continue };
            mutants += 1;
            if let Ok(v) = replay_scenario(&m, &bad, Mode::Strict) {
                ensure(!v.passed, || format!("{name}: mutant `{what}` of `{}` still passes", sc.name))?;
            }
        }
    }
    Ok(format!("{scenarios} scenarios pass, {mutants} mutants rejected"))
}

fn c5_or_split_count() -> Outcome {
    let mut counts = Vec::new();
    for n in 1..=4usize {
        let states: String = (0..=n).map(|i| format!("state S{i} ")).collect();
        let branches: Vec<String> = (1..=n).map(|i| format!("S{i} if g{i} do a{i}")).collect();
        // a split needs two outputs, so n = 1 is the plain guarded transition
        let split = if n == 1 { "" } else { "split or " };
        let text = format!("process \"or{n}\" {{ {states} trans t1 {{ from S0 on ev {split}to {} }} }}", branches.join(", "));
        let m = parse_dsl(&text).map_err(|e| e.to_string())?;
        let oracle = (1u32..(1 << n)).count();
        for mode in [Mode::PaperExact, Mode::Strict] {
            let doc = emit_feature(&m, mode).map_err(|e| e.to_string())?;
            ensure(doc.scenarios.len() == oracle, || format!("n={n} {mode:?}: {} scenarios, expected {oracle}", doc.scenarios.len()))?;
            let subsets: BTreeSet<Vec<String>> = doc
                .scenarios
                .iter()
                .map(|s| s.given.iter().chain(&s.when).filter(|t| t.atom.as_str().starts_with('g')).map(|t| t.to_string()).collect())
                .collect();
            ensure(subsets.len() == oracle, || format!("n={n}: guard subsets repeat"))?;
        }
        counts.push(oracle);
    }
    let m6 = blocks_of_text(&golden(6)).len();
    ensure(counts[1] == m6, || format!("n=2 gives {}, M6 golden has {m6}", counts[1]))?;
    Ok(format!("scenario counts {counts:?}"))
}

fn c6_guard_overlap() -> Outcome {
    let pair = regex::Regex::new(r"transitions (\S+) and (\S+)").unwrap();
    let flagged = |m: &ProcessModel| -> BTreeSet<(String, String)> {
        lint(m)
            .iter()
            .filter(|d| d.code == DiagCode::OverlappingGuards)
            .filter_map(|d| pair.captures(&d.message))
            .map(|c| {
                let (a, b) = (c[1].to_string(), c[2].to_string());
                if a < b { (a, b) } else { (b, a) }
            })
            .collect()
    };
    let m4 = flagged(&corpus::fixture("m4"));
    ensure(m4.contains(&("t1".into(), "t2".into())), || format!("M4 not flagged: {m4:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut overlapping = 0;
    for sys in 0..100 {
        let atoms = rng.random_range(1..=6usize);
        let k = rng.random_range(2..=5usize);
        // each guard is a conjunction of (atom index, polarity) over distinct atoms
        let guards: Vec<Vec<(usize, bool)>> = (0..k)
            .map(|_| {
                let mut idx: Vec<usize> = (0..atoms).collect();
                let len = rng.random_range(1..=atoms.min(3));
                let (chosen, _) = idx.partial_shuffle(&mut rng, len);
                chosen.iter().map(|&a| (a, rng.random_bool(0.5))).collect()
            })
            .collect();
        let trans: Vec<String> = guards
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let lits: Vec<String> = g.iter().map(|&(a, pos)| format!("{}g{}", if pos { "" } else { "not " }, a + 1)).collect();
                format!("trans t{} {{ from S1 if {} do a{} to S2 }}", i + 1, lits.join(" and "), i + 1)
            })
            .collect();
        let text = format!("process \"g{sys}\" {{ state S1 state S2 trans setup {{ from alpha on init to S1 }} {} }}", trans.join(" "));
        let m = parse_dsl(&text).map_err(|e| format!("{text}: {e}"))?;
        let holds = |g: &[(usize, bool)], v: u32| g.iter().all(|&(a, pos)| (v >> a & 1 == 1) == pos);
        let mut oracle = BTreeSet::new();
        for i in 0..k {
            for j in i + 1..k {
                if (0..1u32 << atoms).any(|v| holds(&guards[i], v) && holds(&guards[j], v)) {
                    let (a, b) = (format!("t{}", i + 1), format!("t{}", j + 1));
                    oracle.insert(if a < b { (a, b) } else { (b, a) });
                }
            }
        }
        overlapping += oracle.len();
        let got = flagged(&m);
        ensure(got == oracle, || format!("{text}: flagged {got:?}, brute force {oracle:?}"))?;
    }
    Ok(format!("M4 flagged, 100 systems agree ({overlapping} overlapping pairs)"))
}

// Minimal DOT grammar: enough to reject malformed output and count
// node and edge statements.

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String, bool),
    Punct(&'static str),
}

fn dot_tokens(src: &str) -> Result<Vec<Tok>, String> {
    let cs: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '"' {
            let mut s = String::new();
            i += 1;
            loop {
                match cs.get(i) {
                    None => return Err("unterminated string".into()),
                    Some('"') => break,
                    Some('\\') => {
                        s.push(*cs.get(i + 1).ok_or("dangling escape")?);
                        i += 2;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            i += 1;
            out.push(Tok::Id(s, true));
        } else if c == '-' && cs.get(i + 1) == Some(&'>') {
            out.push(Tok::Punct("->"));
            i += 2;
        } else if let Some(p) = ["{", "}", "[", "]", ";", ",", "="].into_iter().find(|p| p.starts_with(c)) {
            out.push(Tok::Punct(p));
            i += 1;
        } else if c.is_alphanumeric() || c == '_' || c == '.' || c == '-' {
            let start = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_' || cs[i] == '.') {
                i += 1;
            }
            if i == start {
                return Err(format!("stray `{c}`"));
            }
            out.push(Tok::Id(cs[start..i].iter().collect(), false));
        } else {
            return Err(format!("unexpected `{c}`"));
        }
    }
    Ok(out)
}

#[derive(Default)]
struct DotGraph {
    nodes: Vec<String>,
    edges: Vec<(String, String)>,
}

struct DotParser {
    toks: Vec<Tok>,
    pos: usize,
    g: DotGraph,
}

impl DotParser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn punct(&mut self, p: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Punct(q)) if *q == p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> Result<(), String> {
        if self.punct(p) { Ok(()) } else { Err(format!("expected `{p}` at token {}, found {:?}", self.pos, self.peek())) }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Id(s, false)) if s.eq_ignore_ascii_case(kw)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn id(&mut self) -> Result<String, String> {
        match self.peek().cloned() {
            Some(Tok::Id(s, _)) => {
                self.pos += 1;
                Ok(s)
            }
            t => Err(format!("expected identifier at token {}, found {t:?}", self.pos)),
        }
    }

    fn graph(mut self) -> Result<DotGraph, String> {
        self.keyword("strict");
        if !self.keyword("digraph") {
            return Err("missing `digraph`".into());
        }
        if matches!(self.peek(), Some(Tok::Id(..))) {
            self.id()?;
        }
        self.expect("{")?;
        self.stmts()?;
        self.expect("}")?;
        match self.peek() {
            None => Ok(self.g),
            Some(t) => Err(format!("trailing {t:?}")),
        }
    }

    fn stmts(&mut self) -> Result<(), String> {
        while !matches!(self.peek(), Some(Tok::Punct("}")) | None) {
            self.stmt()?;
            self.punct(";");
        }
        Ok(())
    }

    fn attrs(&mut self) -> Result<(), String> {
        while self.punct("[") {
            while !self.punct("]") {
                self.id()?;
                self.expect("=")?;
                self.id()?;
                if !self.punct(",") {
                    self.punct(";");
                }
            }
        }
        Ok(())
    }

    fn stmt(&mut self) -> Result<(), String> {
        if self.keyword("graph") || self.keyword("node") || self.keyword("edge") {
            return self.attrs();
        }
        if self.keyword("subgraph") {
            if matches!(self.peek(), Some(Tok::Id(..))) {
                self.id()?;
            }
            self.expect("{")?;
            self.stmts()?;
            return self.expect("}");
        }
        let first = self.id()?;
        if self.punct("=") {
            self.id()?;
            return Ok(());
        }
        let mut prev = first.clone();
        let mut is_edge = false;
        while self.punct("->") {
            let next = self.id()?;
            self.g.edges.push((prev, next.clone()));
            prev = next;
            is_edge = true;
        }
        if !is_edge {
            self.g.nodes.push(first);
        }
        self.attrs()
    }
}

fn parse_dot(src: &str) -> Result<DotGraph, String> {
    DotParser { toks: dot_tokens(src)?, pos: 0, g: DotGraph::default() }.graph()
}

fn c7_dot() -> Outcome {
    ensure(parse_dot("digraph { a -> }").is_err(), || "checker accepts a dangling edge".into())?;
    ensure(parse_dot("digraph { \"a\" [label=x] ").is_err(), || "checker accepts an unclosed graph".into())?;
    let models = corpus_models();
    for (name, m) in &models {
        let g = parse_dot(&render_dot(m)).map_err(|e| format!("{name}: {e}"))?;
        let want_nodes = m.state_paths().len() + m.pseudostates().len();
        ensure(g.nodes.len() == want_nodes, || format!("{name}: {} nodes, expected {want_nodes}", g.nodes.len()))?;
        let declared: BTreeSet<&String> = g.nodes.iter().collect();
        ensure(declared.len() == g.nodes.len(), || format!("{name}: duplicate node"))?;
        let want_edges: usize = m.transitions.iter().map(|t| t.inputs.len() * t.outputs.len()).sum();
        ensure(g.edges.len() == want_edges, || format!("{name}: {} edges, expected {want_edges}", g.edges.len()))?;
        for (a, b) in &g.edges {
            ensure(declared.contains(a) && declared.contains(b), || format!("{name}: edge {a} -> {b} to undeclared node"))?;
        }
    }
    Ok(format!("{} renderings parse with expected node and edge counts", models.len()))
}

#[derive(PartialEq)]
struct RunOutput {
    status: Option<i32>,
    stdout: Vec<u8>,
    stderr: Vec<u8>,
    files: Vec<Vec<u8>>,
}

/// Runs the binary inside `dir`; `files` are outputs it is told to write.
fn run_cli(dir: &std::path::Path, args: &[String], files: &[&str]) -> RunOutput {
    for f in files {
        let _ = std::fs::remove_file(dir.join(f));
    }
    let o = Command::new(env!("CARGO_BIN_EXE_flowspec"))
        .args(args)
        .current_dir(dir)
        .env_remove("FLOWSPEC_STYLE")
        .output()
        .expect("spawn flowspec");
    RunOutput {
        status: o.status.code(),
        stdout: o.stdout,
        stderr: o.stderr,
        files: files.iter().map(|f| std::fs::read(dir.join(f)).unwrap_or_default()).collect(),
    }
}

fn c8_cli_determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir = tmp.path();
    let fixtures = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let mut runs = 0;
    for i in 1..=9 {
        for ext in ["pml", "xml"] {
            let model = format!("{fixtures}/m{i}.{ext}");
            let feature = format!("m{i}.{ext}.feature");
            let s = |x: &str| x.to_string();
            let cases: Vec<(Vec<String>, Vec<&str>)> = vec![
                (vec![s("compile"), model.clone(), s("--mode"), s("strict"), s("-o"), feature.clone()], vec![&feature]),
                (vec![s("compile"), model.clone()], vec![]),
                (vec![s("compile"), model.clone(), s("--style"), s("gherkin")], vec![]),
                (vec![s("check"), model.clone(), feature.clone(), s("--mode"), s("strict")], vec![]),
                (vec![s("check"), model.clone(), feature.clone(), s("--json")], vec![]),
                (vec![s("reverse"), feature.clone(), s("--dot"), s("r.dot"), s("--model-out"), s("r.xml")], vec!["r.dot", "r.xml"]),
                (vec![s("reverse"), feature.clone()], vec![]),
                (vec![s("steps"), feature.clone()], vec![]),
                (vec![s("render"), model.clone()], vec![]),
                (vec![s("lint"), model.clone()], vec![]),
            ];
            for (args, files) in cases {
                let a = run_cli(dir, &args, &files);
                let b = run_cli(dir, &args, &files);
                ensure(a.status.is_some_and(|c| c <= 1), || format!("{args:?}: status {:?}", a.status))?;
                ensure(a == b, || format!("{args:?}: output differs between runs"))?;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} commands byte-identical across two runs"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("paper-exact goldens", c1_golden),
        ("step skeletons", c2_skeletons),
        ("strict round trip", c3_round_trip),
        ("strict replay and mutants", c4_strict_replay),
        ("or-split scenario count", c5_or_split_count),
        ("guard overlap lint", c6_guard_overlap),
        ("DOT well-formedness", c7_dot),
        ("CLI determinism", c8_cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let outcome = guarded(f);
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

fn guarded(f: impl FnOnce() -> Outcome + UnwindSafe) -> Outcome {
    catch_unwind(f).unwrap_or_else(|p| {
        let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    })
}
