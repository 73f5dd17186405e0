//! Structured Given-When-Then documents: types, printer and parser.
//!
//! Text layout:
//!
//! ```text
//! # states: S1, S2
//! # guards: g1
//! Feature: Orders
//!   As a clerk
//!   I request order intake
//!   To gain throughput
//!
//! Scenario: Sequence t1
//!   GIVEN S1 AND NOT g1
//!   WHEN ev1
//!   THEN a1; a2 AND S2
//! ```
//!
//! Leading `#` lines carry [`InferenceHints`]; other comments are ignored.
//! A clause whose body is not a term list (for example a sentence with
//! quoted values) is kept verbatim as a prose step.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::dsl::SourceSpan;
use crate::ident::Ident;
use crate::model::{DEFAULT_FINAL, DEFAULT_INITIAL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermRole {
    State,
    Event,
    Guard,
    Action,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub atom: Ident,
    pub negated: bool,
    pub role: TermRole,
}

impl Term {
    pub fn state(atom: Ident) -> Self {
        Term { atom, negated: false, role: TermRole::State }
    }

    pub fn event(atom: Ident) -> Self {
        Term { atom, negated: false, role: TermRole::Event }
    }

    pub fn guard(atom: Ident, negated: bool) -> Self {
        Term { atom, negated, role: TermRole::Guard }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "NOT {}", self.atom)
        } else {
            write!(f, "{}", self.atom)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ThenItem {
    /// Actions performed in exactly this order.
    ActionSeq(Vec<Ident>),
    StateTerm(Ident),
}

impl fmt::Display for ThenItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThenItem::ActionSeq(v) => {
                let parts: Vec<&str> = v.iter().map(Ident::as_str).collect();
                f.write_str(&parts.join("; "))
            }
            ThenItem::StateTerm(s) => write!(f, "{s}"),
        }
    }
}

/// A sentence-style step kept as written.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProseStep {
    pub keyword: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Scenario {
    pub name: String,
    pub given: Vec<Term>,
    pub when: Vec<Term>,
    pub then: Vec<ThenItem>,
    /// Non-empty only for sentence-style scenarios, whose term lists are
    /// then empty.
    pub prose: Vec<ProseStep>,
}

impl Scenario {
    pub fn is_prose(&self) -> bool {
        !self.prose.is_empty()
    }

    /// Atoms of GIVEN terms with the given role, in order.
    pub fn given_of(&self, role: TermRole) -> impl Iterator<Item = &Term> {
        self.given.iter().filter(move |t| t.role == role)
    }

    pub fn then_states(&self) -> impl Iterator<Item = &Ident> {
        self.then.iter().filter_map(|i| match i {
            ThenItem::StateTerm(s) => Some(s),
            ThenItem::ActionSeq(_) => None,
        })
    }

    /// All THEN actions flattened in textual order.
    pub fn then_actions(&self) -> Vec<Ident> {
        self.then
            .iter()
            .flat_map(|i| match i {
                ThenItem::ActionSeq(v) => v.clone(),
                ThenItem::StateTerm(_) => Vec::new(),
            })
            .collect()
    }
}

/// Declared roles and structure that text alone cannot convey.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InferenceHints {
    pub declared_states: BTreeSet<Ident>,
    pub declared_events: BTreeSet<Ident>,
    pub declared_guards: BTreeSet<Ident>,
    pub declared_actions: BTreeSet<Ident>,
    pub initial_name: Option<Ident>,
    pub final_name: Option<Ident>,
    pub entry: BTreeMap<Ident, Vec<Ident>>,
    pub exit: BTreeMap<Ident, Vec<Ident>>,
    /// Composite path to the path of its initial child.
    pub composite: BTreeMap<Ident, Ident>,
}

impl InferenceHints {
    pub fn is_empty(&self) -> bool {
        *self == InferenceHints::default()
    }

    pub fn initial(&self) -> Ident {
        self.initial_name.clone().unwrap_or_else(|| Ident::new(DEFAULT_INITIAL).unwrap())
    }

    pub fn final_(&self) -> Ident {
        self.final_name.clone().unwrap_or_else(|| Ident::new(DEFAULT_FINAL).unwrap())
    }

    /// Merges `other` into `self`; entries of `other` win on key clashes.
    pub fn merge(&mut self, other: &InferenceHints) {
        self.declared_states.extend(other.declared_states.iter().cloned());
        self.declared_events.extend(other.declared_events.iter().cloned());
        self.declared_guards.extend(other.declared_guards.iter().cloned());
        self.declared_actions.extend(other.declared_actions.iter().cloned());
        if other.initial_name.is_some() {
            self.initial_name.clone_from(&other.initial_name);
        }
        if other.final_name.is_some() {
            self.final_name.clone_from(&other.final_name);
        }
        self.entry.extend(other.entry.iter().map(|(k, v)| (k.clone(), v.clone())));
        self.exit.extend(other.exit.iter().map(|(k, v)| (k.clone(), v.clone())));
        self.composite.extend(other.composite.iter().map(|(k, v)| (k.clone(), v.clone())));
    }

    fn is_state_like(&self, atom: &Ident) -> bool {
        self.declared_states.contains(atom)
            || *atom == self.initial()
            || *atom == self.final_()
            || atom.depth() > 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FeatureDoc {
    pub title: String,
    pub role: String,
    pub feature: String,
    pub benefit: String,
    pub scenarios: Vec<Scenario>,
    pub hints: InferenceHints,
}

impl FeatureDoc {
    /// Adds the hints needed for the parser to recover every term role, so
    /// that `parse_feature(&format_feature(&d.normalized(), s))` equals
    /// `d.normalized()`.
    pub fn normalized(&self) -> FeatureDoc {
        let mut d = self.clone();
        for s in &self.scenarios {
            for t in s.given.iter().chain(&s.when) {
                match t.role {
                    TermRole::Guard => {
                        d.hints.declared_guards.insert(t.atom.clone());
                    }
                    TermRole::Event => {
                        d.hints.declared_events.insert(t.atom.clone());
                    }
                    TermRole::State => {
                        d.hints.declared_states.insert(t.atom.clone());
                    }
                    TermRole::Action => {
                        d.hints.declared_actions.insert(t.atom.clone());
                    }
                }
            }
            for st in s.then_states() {
                d.hints.declared_states.insert(st.clone());
            }
        }
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Style {
    #[default]
    PaperUpper,
    Gherkin,
}

impl Style {
    fn keywords(self) -> [&'static str; 3] {
        match self {
            Style::PaperUpper => ["GIVEN", "WHEN", "THEN"],
            Style::Gherkin => ["Given", "When", "Then"],
        }
    }
}

fn join_terms(terms: &[Term]) -> String {
    terms.iter().map(Term::to_string).collect::<Vec<_>>().join(" AND ")
}

fn join_then(items: &[ThenItem]) -> String {
    items.iter().map(ThenItem::to_string).collect::<Vec<_>>().join(" AND ")
}

fn ident_list(v: impl IntoIterator<Item = impl fmt::Display>) -> String {
    v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn write_hints(out: &mut String, h: &InferenceHints) {
    if let Some(i) = &h.initial_name {
        let _ = writeln!(out, "# initial: {i}");
    }
    if let Some(f) = &h.final_name {
        let _ = writeln!(out, "# final: {f}");
    }
    let sets = [
        ("states", &h.declared_states),
        ("events", &h.declared_events),
        ("guards", &h.declared_guards),
        ("actions", &h.declared_actions),
    ];
    for (key, set) in sets {
        if !set.is_empty() {
            let _ = writeln!(out, "# {key}: {}", ident_list(set));
        }
    }
    for (s, acts) in &h.entry {
        let _ = writeln!(out, "# entry {s}: {}", ident_list(acts));
    }
    for (s, acts) in &h.exit {
        let _ = writeln!(out, "# exit {s}: {}", ident_list(acts));
    }
    for (s, child) in &h.composite {
        let _ = writeln!(out, "# composite {s}: {child}");
    }
}

fn header_line(out: &mut String, label: &str, value: &str) {
    if value.is_empty() {
        let _ = writeln!(out, "{label}");
    } else {
        let _ = writeln!(out, "{label} {value}");
    }
}

/// Renders a document; byte output depends only on `doc` and `style`.
pub fn format_feature(doc: &FeatureDoc, style: Style) -> String {
    let mut out = String::new();
    write_hints(&mut out, &doc.hints);
    header_line(&mut out, "Feature:", &doc.title);
    header_line(&mut out, "  As a", &doc.role);
    header_line(&mut out, "  I request", &doc.feature);
    header_line(&mut out, "  To gain", &doc.benefit);
    let [given, when, then] = style.keywords();
    for s in &doc.scenarios {
        out.push('\n');
        header_line(&mut out, "Scenario:", &s.name);
        if s.is_prose() {
            for p in &s.prose {
                let _ = writeln!(out, "  {} {}", p.keyword, p.text);
            }
            continue;
        }
        let _ = writeln!(out, "  {given} {}", join_terms(&s.given));
        let _ = writeln!(out, "  {when} {}", join_terms(&s.when));
        let _ = writeln!(out, "  {then} {}", join_then(&s.then));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeatureError {
    #[error("EmptyDocument: no header, hints or scenarios")]
    EmptyDocument,
    #[error("{span}: MalformedClause: {message}")]
    MalformedClause { span: SourceSpan, message: String },
    #[error("{span}: UnknownKeyword: `{word}`")]
    UnknownKeyword { span: SourceSpan, word: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Clause {
    Given,
    When,
    Then,
    And,
}

fn clause_keyword(word: &str) -> Option<Clause> {
    match word {
        "GIVEN" | "Given" => Some(Clause::Given),
        "WHEN" | "When" => Some(Clause::When),
        "THEN" | "Then" => Some(Clause::Then),
        "AND" | "And" | "BUT" | "But" => Some(Clause::And),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Word(&'a str),
    And,
    Not,
    Semi,
}

/// Splits a clause body into term tokens with 1-based columns, or `None`
/// when the body reads as a sentence (adjacent names, punctuation).
fn term_tokens(body: &str, col0: usize) -> Option<Vec<(Tok<'_>, usize)>> {
    let mut toks = Vec::new();
    for (off, raw) in word_offsets(body) {
        let mut rest = raw;
        let mut col = col0 + off;
        while !rest.is_empty() {
            let cut = rest.find(';').unwrap_or(rest.len());
            if cut > 0 {
                let w = &rest[..cut];
                let t = match w {
                    "AND" => Tok::And,
                    "NOT" => Tok::Not,
                    _ if Ident::new(w).is_ok() => Tok::Word(w),
                    _ => return None,
                };
                toks.push((t, col));
            }
            if cut < rest.len() {
                toks.push((Tok::Semi, col + cut));
                rest = &rest[cut + 1..];
                col += cut + 1;
            } else {
                rest = "";
            }
        }
    }
    let adjacent = toks
        .windows(2)
        .any(|w| matches!((&w[0].0, &w[1].0), (Tok::Word(_), Tok::Word(_))));
    if adjacent {
        None
    } else {
        Some(toks)
    }
}

fn word_offsets(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(b)) => {
                out.push((b, &s[b..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(b) = start {
        out.push((b, &s[b..]));
    }
    out
}

/// One AND-separated group: optional NOT, then names joined by `;`.
struct Group<'a> {
    negated: bool,
    names: Vec<&'a str>,
    col: usize,
}

fn groups<'a>(toks: &[(Tok<'a>, usize)], end_col: usize, span: &dyn Fn(usize) -> SourceSpan) -> Result<Vec<Group<'a>>, FeatureError> {
    let bad = |col: usize, msg: &str| FeatureError::MalformedClause { span: span(col), message: msg.to_string() };
    let mut out = Vec::new();
    let mut i = 0;
    loop {
        let col = toks.get(i).map_or(end_col, |t| t.1);
        let mut g = Group { negated: false, names: Vec::new(), col };
        if let Some((Tok::Not, _)) = toks.get(i) {
            g.negated = true;
            i += 1;
        }
        loop {
            match toks.get(i) {
                Some((Tok::Word(w), _)) => g.names.push(w),
                Some((_, c)) => return Err(bad(*c, "expected a name")),
                None => return Err(bad(end_col, "expected a name")),
            }
            i += 1;
            match toks.get(i) {
                Some((Tok::Semi, _)) => i += 1,
                _ => break,
            }
        }
        out.push(g);
        match toks.get(i) {
            None => return Ok(out),
            Some((Tok::And, _)) => i += 1,
            Some((_, c)) => return Err(bad(*c, "expected AND")),
        }
    }
}

struct Builder<'h> {
    hints: &'h InferenceHints,
    scenarios: Vec<Scenario>,
    current: Option<Scenario>,
    last: Option<Clause>,
    /// Raw clause lines of the current scenario, for prose fallback.
    raw: Vec<ProseStep>,
    prose: bool,
}

impl Builder<'_> {
    fn flush(&mut self) {
        if let Some(mut s) = self.current.take() {
            if self.prose {
                s.given.clear();
                s.when.clear();
                s.then.clear();
                s.prose = std::mem::take(&mut self.raw);
            }
            self.scenarios.push(s);
        }
        self.raw.clear();
        self.prose = false;
        self.last = None;
    }

    fn start(&mut self, name: Option<String>) {
        self.flush();
        let name = name.unwrap_or_else(|| format!("scenario {}", self.scenarios.len() + 1));
        self.current = Some(Scenario { name, ..Scenario::default() });
    }

    fn given_role(&self, atom: &Ident, negated: bool) -> TermRole {
        let h = self.hints;
        if negated || h.declared_guards.contains(atom) {
            TermRole::Guard
        } else if h.declared_events.contains(atom) {
            TermRole::Event
        } else if h.declared_actions.contains(atom) {
            TermRole::Action
        } else {
            TermRole::State
        }
    }

    fn when_role(&self, atom: &Ident, negated: bool) -> TermRole {
        let h = self.hints;
        if negated || h.declared_guards.contains(atom) {
            TermRole::Guard
        } else if h.declared_states.contains(atom) {
            TermRole::State
        } else if h.declared_actions.contains(atom) {
            TermRole::Action
        } else {
            TermRole::Event
        }
    }

    fn clause(&mut self, kind: Clause, keyword: &str, body: &str, body_col: usize, span: &dyn Fn(usize) -> SourceSpan) -> Result<(), FeatureError> {
        let new_block = kind == Clause::Given && matches!(self.last, Some(Clause::When | Clause::Then));
        if self.current.is_none() || new_block {
            self.start(None);
        }
        self.raw.push(ProseStep { keyword: keyword.to_string(), text: body.to_string() });
        let effective = match kind {
            Clause::And => match self.last {
                Some(k) => k,
                None => {
                    self.prose = true;
                    return Ok(());
                }
            },
            k => k,
        };
        self.last = Some(effective);
        if self.prose {
            return Ok(());
        }
        let Some(toks) = term_tokens(body, body_col) else {
            self.prose = true;
            return Ok(());
        };
        let end_col = body_col + body.len();
        let gs = groups(&toks, end_col, span)?;
        let mut given = Vec::new();
        let mut when = Vec::new();
        let mut then = Vec::new();
        for g in gs {
            let bad = |msg: &str| FeatureError::MalformedClause { span: span(g.col), message: msg.to_string() };
            let idents: Vec<Ident> = g.names.iter().map(|n| Ident::new(*n).expect("checked")).collect();
            match effective {
                Clause::Given | Clause::When => {
                    if idents.len() > 1 {
                        return Err(bad("`;` is only allowed in THEN"));
                    }
                    let atom = idents.into_iter().next().expect("nonempty");
                    let role = if effective == Clause::Given {
                        self.given_role(&atom, g.negated)
                    } else {
                        self.when_role(&atom, g.negated)
                    };
                    let t = Term { atom, negated: g.negated, role };
                    if effective == Clause::Given {
                        given.push(t);
                    } else {
                        when.push(t);
                    }
                }
                Clause::Then => {
                    if g.negated {
                        return Err(bad("NOT is not allowed in THEN"));
                    }
                    if idents.len() == 1 && self.hints.is_state_like(&idents[0]) {
                        then.push(ThenItem::StateTerm(idents.into_iter().next().expect("one")));
                    } else {
                        then.push(ThenItem::ActionSeq(idents));
                    }
                }
                Clause::And => unreachable!(),
            }
        }
        let s = self.current.as_mut().expect("started");
        s.given.extend(given);
        s.when.extend(when);
        s.then.extend(then);
        Ok(())
    }
}

fn parse_hint(line: &str, hints: &mut InferenceHints) {
    let Some((key, value)) = line.split_once(':') else {
        return;
    };
    let names: Vec<Ident> = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .filter_map(|s| Ident::new(s).ok())
        .collect();
    let mut words = key.split_whitespace();
    match (words.next(), words.next().map(Ident::new)) {
        (Some("states"), None) => hints.declared_states.extend(names),
        (Some("events"), None) => hints.declared_events.extend(names),
        (Some("guards"), None) => hints.declared_guards.extend(names),
        (Some("actions"), None) => hints.declared_actions.extend(names),
        (Some("initial"), None) => hints.initial_name = names.into_iter().next(),
        (Some("final"), None) => hints.final_name = names.into_iter().next(),
        (Some("entry"), Some(Ok(s))) => {
            hints.entry.insert(s, names);
        }
        (Some("exit"), Some(Ok(s))) => {
            hints.exit.insert(s, names);
        }
        (Some("composite"), Some(Ok(s))) => {
            if let Some(c) = names.into_iter().next() {
                hints.composite.insert(s, c);
            }
        }
        _ => {}
    }
}

fn strip_label<'a>(line: &'a str, label: &str) -> Option<&'a str> {
    let rest = line.strip_prefix(label)?;
    if rest.is_empty() {
        Some("")
    } else {
        rest.strip_prefix(' ').map(str::trim)
    }
}

/// Parses feature text in either keyword style.
pub fn parse_feature(text: &str) -> Result<FeatureDoc, FeatureError> {
    parse_feature_named(text, "<feature>")
}

pub fn parse_feature_named(text: &str, file: &str) -> Result<FeatureDoc, FeatureError> {
    let mut doc = FeatureDoc::default();
    let mut hints = InferenceHints::default();
    let mut seen_anything = false;
    // hints are read first so that roles can be assigned in one pass
    for line in text.lines() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        match t.strip_prefix('#') {
            Some(h) => parse_hint(h.trim(), &mut hints),
            None => break,
        }
    }
    let mut b = Builder { hints: &hints, scenarios: Vec::new(), current: None, last: None, raw: Vec::new(), prose: false };
    for (n, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            seen_anything |= t.starts_with('#');
            continue;
        }
        seen_anything = true;
        let indent = line.len() - line.trim_start().len();
        let span = |col: usize| SourceSpan { file: file.to_string(), line: n + 1, column: col };
        if let Some(rest) = strip_label(t, "Feature:") {
            doc.title = rest.to_string();
            continue;
        }
        if let Some(rest) = strip_label(t, "Scenario:") {
            b.start(Some(rest.to_string()));
            continue;
        }
        if b.current.is_none() {
            if let Some(rest) = strip_label(t, "As a") {
                doc.role = rest.to_string();
                continue;
            }
            if let Some(rest) = strip_label(t, "I request") {
                doc.feature = rest.to_string();
                continue;
            }
            if let Some(rest) = strip_label(t, "To gain") {
                doc.benefit = rest.to_string();
                continue;
            }
        }
        let (word, body) = t.split_once(char::is_whitespace).unwrap_or((t, ""));
        let Some(kind) = clause_keyword(word) else {
            return Err(FeatureError::UnknownKeyword { span: span(indent + 1), word: word.to_string() });
        };
        let body = body.trim_start();
        let body_col = indent + 1 + (t.len() - body.len());
        if body.is_empty() {
            return Err(FeatureError::MalformedClause { span: span(indent + 1 + word.len()), message: format!("{word} has no body") });
        }
        b.clause(kind, word, body.trim_end(), body_col, &span)?;
    }
    b.flush();
    if !seen_anything {
        return Err(FeatureError::EmptyDocument);
    }
    doc.scenarios = b.scenarios;
    doc.hints = hints;
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ident::id;

    #[test]
    fn bare_code_text_parses_into_scenarios() {
        let doc = parse_feature("GIVEN S1\nWHEN ev1\nTHEN a1 AND a3\n\nGIVEN S2\nWHEN ev2\nTHEN a2 AND a3\n").unwrap();
        assert_eq!(doc.scenarios.len(), 2);
        assert_eq!(doc.scenarios[1].name, "scenario 2");
        assert_eq!(doc.scenarios[0].given, vec![Term::state(id("S1"))]);
        assert_eq!(doc.scenarios[0].when, vec![Term::event(id("ev1"))]);
        assert_eq!(
            doc.scenarios[0].then,
            vec![ThenItem::ActionSeq(vec![id("a1")]), ThenItem::ActionSeq(vec![id("a3")])]
        );
    }

    #[test]
    fn sequences_and_state_terms() {
        let doc = parse_feature("# states: S3\nGIVEN S1 AND S2\nWHEN e1 AND e2 AND e3\nTHEN a1; a2; a3 AND S3\n").unwrap();
        let s = &doc.scenarios[0];
        assert_eq!(
            s.then,
            vec![ThenItem::ActionSeq(vec![id("a1"), id("a2"), id("a3")]), ThenItem::StateTerm(id("S3"))]
        );
        assert_eq!(join_then(&s.then), "a1; a2; a3 AND S3");
    }

    #[test]
    fn negation_marks_guards() {
        let doc = parse_feature("GIVEN S1 AND g1 AND NOT g2\nWHEN ev1\nTHEN a1 AND a2\n").unwrap();
        let g = &doc.scenarios[0].given;
        assert_eq!(g[2], Term::guard(id("g2"), true));
        // without a hint a positive GIVEN atom reads as a state
        assert_eq!(g[1].role, TermRole::State);
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_feature(""), Err(FeatureError::EmptyDocument));
        assert_eq!(parse_feature("  \n\n"), Err(FeatureError::EmptyDocument));
        match parse_feature("Scenario: x\n  GIVEN S1 AND\n") {
            Err(FeatureError::MalformedClause { span, .. }) => assert_eq!((span.line, span.column), (2, 15)),
            other => panic!("{other:?}"),
        }
        match parse_feature("Scenario: x\n  GIVEN S1\n  WHILE ev1\n") {
            Err(FeatureError::UnknownKeyword { span, word }) => {
                assert_eq!(word, "WHILE");
                assert_eq!((span.line, span.column), (3, 3));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_feature("GIVEN S1\nWHEN ev1\nTHEN NOT a1\n"),
            Err(FeatureError::MalformedClause { .. })
        ));
    }

    #[test]
    fn sentences_become_prose() {
        let text = "Scenario: server is available\n  Given there is a resource at \"http://x\"\n  When I request this resource as raw\n  Then the response code is 200\n";
        let doc = parse_feature(text).unwrap();
        let s = &doc.scenarios[0];
        assert!(s.is_prose());
        assert_eq!(s.prose.len(), 3);
        assert_eq!(s.prose[2].text, "the response code is 200");
        assert!(s.given.is_empty());
    }

    #[test]
    fn both_styles_round_trip() {
        let mut doc = FeatureDoc { title: "T".into(), role: "clerk".into(), ..FeatureDoc::default() };
        doc.hints.entry.insert(id("S1"), vec![id("a2")]);
        doc.hints.composite.insert(id("S6"), id("S6.1"));
        doc.scenarios.push(Scenario {
            name: "MultipleChoice t1 1".into(),
            given: vec![Term::state(id("S1")), Term::guard(id("g1"), false), Term::guard(id("g2"), true)],
            when: vec![Term::event(id("ev1"))],
            then: vec![ThenItem::ActionSeq(vec![id("a1"), id("a2")]), ThenItem::StateTerm(id("S2"))],
            prose: vec![],
        });
        let d = doc.normalized();
        for style in [Style::PaperUpper, Style::Gherkin] {
            let text = format_feature(&d, style);
            assert_eq!(parse_feature(&text).unwrap(), d, "{text}");
        }
    }

    #[test]
    fn empty_doc_is_header_only() {
        let text = format_feature(&FeatureDoc { title: "x".into(), ..FeatureDoc::default() }, Style::Gherkin);
        assert_eq!(text, "Feature: x\n  As a\n  I request\n  To gain\n");
    }
}
