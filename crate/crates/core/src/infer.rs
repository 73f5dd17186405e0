//! Reverse translation: a process model from a feature document.
//!
//! Term roles are fixed first (hints, then usage). Scenarios whose name
//! reads `<Kind> <id>[ <n>]` and whose THEN lists target states are
//! "traced": they are grouped per transition and rebuilt from their
//! firing modes. The remaining scenarios are folded by shape into
//! or-splits, and-splits and joins, and otherwise become one transition
//! each, with a synthetic `_after_<scenario>` sink when no target is named.

use std::collections::{BTreeMap, BTreeSet};

use crate::feature::{FeatureDoc, Scenario, TermRole, ThenItem};
use crate::ident::{common_prefix_len, GuardExpr, Ident, Literal};
use crate::model::{InBranch, JoinKind, OutBranch, PatternKind, ProcessModel, SplitKind, StateNode, TransitionDecl};
use crate::replay::{effect, Configuration, FiringMode};
use crate::validate::{validate, DiagCode, Diagnostic};

pub use crate::feature::InferenceHints;

const MARK: &str = "__flowspec_mark";

/// One term-style scenario with every term resolved to a role.
#[derive(Debug, Clone)]
struct Row {
    index: usize,
    name: String,
    traced: Option<(PatternKind, Ident)>,
    states: Vec<Ident>,
    events: Vec<Ident>,
    lits: Vec<Literal>,
    actions: Vec<Ident>,
    targets: Vec<Ident>,
}

struct Roles<'h> {
    hints: &'h InferenceHints,
    negated: BTreeSet<Ident>,
    given: BTreeSet<Ident>,
    when: BTreeSet<Ident>,
}

impl Roles<'_> {
    fn hinted(&self, a: &Ident) -> Option<TermRole> {
        let h = self.hints;
        if h.declared_states.contains(a) || *a == h.initial() || *a == h.final_() {
            Some(TermRole::State)
        } else if h.declared_guards.contains(a) {
            Some(TermRole::Guard)
        } else if h.declared_events.contains(a) {
            Some(TermRole::Event)
        } else if h.declared_actions.contains(a) {
            Some(TermRole::Action)
        } else {
            None
        }
    }

    fn term(&self, a: &Ident) -> TermRole {
        if let Some(r) = self.hinted(a) {
            return r;
        }
        if self.negated.contains(a) || (self.given.contains(a) && self.when.contains(a)) {
            TermRole::Guard
        } else if self.given.contains(a) || a.depth() > 1 {
            TermRole::State
        } else if self.when.contains(a) {
            TermRole::Event
        } else {
            TermRole::Action
        }
    }

    fn then_is_state(&self, a: &Ident) -> bool {
        self.term(a) == TermRole::State
    }
}

fn traced_name(name: &str) -> Option<(PatternKind, Ident)> {
    let mut parts = name.split(' ');
    let kind = PatternKind::from_name(parts.next()?)?;
    if matches!(kind, PatternKind::EntryExitCase | PatternKind::EmbeddedStates) {
        return None;
    }
    let id = Ident::new(parts.next()?).ok()?;
    match (parts.next(), parts.next()) {
        (None, _) => Some((kind, id)),
        (Some(n), None) if n.parse::<usize>().is_ok_and(|n| n > 0) => Some((kind, id)),
        _ => None,
    }
}

fn build_rows(doc: &FeatureDoc, hints: &InferenceHints, diags: &mut Vec<Diagnostic>) -> Vec<Row> {
    let term_scs: Vec<(usize, &Scenario)> = doc.scenarios.iter().enumerate().filter(|(_, s)| !s.is_prose()).collect();
    for s in doc.scenarios.iter().filter(|s| s.is_prose()) {
        diags.push(Diagnostic::warning(DiagCode::ProseScenario, &s.name, "sentence-style scenario is not inferable"));
    }
    let mut roles = Roles { hints, negated: BTreeSet::new(), given: BTreeSet::new(), when: BTreeSet::new() };
    for (_, s) in &term_scs {
        for t in s.given.iter().chain(&s.when) {
            if t.negated {
                roles.negated.insert(t.atom.clone());
            }
        }
        roles.given.extend(s.given.iter().map(|t| t.atom.clone()));
        roles.when.extend(s.when.iter().map(|t| t.atom.clone()));
    }
    let mut rows = Vec::new();
    for (index, s) in term_scs {
        let mut row = Row {
            index,
            name: s.name.clone(),
            traced: None,
            states: Vec::new(),
            events: Vec::new(),
            lits: Vec::new(),
            actions: Vec::new(),
            targets: Vec::new(),
        };
        let given = s.given.iter().map(|t| (t, true));
        let when = s.when.iter().map(|t| (t, false));
        for (t, in_given) in given.chain(when) {
            match roles.term(&t.atom) {
                TermRole::Guard => row.lits.push(Literal { atom: t.atom.clone(), negated: t.negated }),
                TermRole::State if in_given => row.states.push(t.atom.clone()),
                TermRole::Event if !in_given => row.events.push(t.atom.clone()),
                TermRole::State => row.events.push(t.atom.clone()),
                TermRole::Event => row.states.push(t.atom.clone()),
                TermRole::Action => {
                    diags.push(Diagnostic::warning(
                        DiagCode::AmbiguousTerm,
                        &s.name,
                        format!("action `{}` used as a condition; ignored", t.atom),
                    ));
                }
            }
        }
        for item in &s.then {
            match item {
                ThenItem::StateTerm(st) => row.targets.push(st.clone()),
                ThenItem::ActionSeq(v) if v.len() == 1 && roles.then_is_state(&v[0]) => row.targets.push(v[0].clone()),
                ThenItem::ActionSeq(v) => row.actions.extend(v.iter().cloned()),
            }
        }
        if !row.targets.is_empty() {
            row.traced = traced_name(&s.name);
        }
        rows.push(row);
    }
    ambiguous_conditions(&rows, &roles, diags);
    rows
}

/// Scenarios leaving the same states on different lone WHEN terms: the
/// terms may be guards rather than events.
fn ambiguous_conditions(rows: &[Row], roles: &Roles<'_>, diags: &mut Vec<Diagnostic>) {
    let mut by_given: BTreeMap<Vec<Ident>, BTreeSet<Ident>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.lits.is_empty() && r.events.len() == 1) {
        by_given.entry(r.states.clone()).or_default().insert(r.events[0].clone());
    }
    for (states, events) in by_given.into_iter().filter(|(_, e)| e.len() > 1) {
        let states = states.iter().map(Ident::as_str).collect::<Vec<_>>().join(", ");
        for e in events.into_iter().filter(|e| roles.hinted(e).is_none()) {
            diags.push(Diagnostic::warning(
                DiagCode::AmbiguousTerm,
                &e,
                format!("`{e}` read as an event; it may be a guard choosing among exits of {states}"),
            ));
        }
    }
}

fn state_forest(rows: &[Row], hints: &InferenceHints) -> Vec<StateNode> {
    let pseudo = [hints.initial(), hints.final_()];
    let mut order: Vec<Ident> = Vec::new();
    let push = |p: &Ident, order: &mut Vec<Ident>| {
        for k in 1..=p.depth() {
            let q = p.prefix(k);
            if !pseudo.contains(&q) && !order.contains(&q) {
                order.push(q);
            }
        }
    };
    for r in rows {
        for p in r.states.iter().chain(&r.targets) {
            push(p, &mut order);
        }
    }
    let hinted = hints
        .declared_states
        .iter()
        .chain(hints.entry.keys())
        .chain(hints.exit.keys())
        .chain(hints.composite.keys())
        .chain(hints.composite.values());
    for p in hinted {
        push(p, &mut order);
    }
    let mut roots: Vec<StateNode> = Vec::new();
    for p in &order {
        let mut node = StateNode::simple(Ident::new(p.local()).expect("segment"));
        node.entry_actions = hints.entry.get(p).cloned().unwrap_or_default();
        node.exit_actions = hints.exit.get(p).cloned().unwrap_or_default();
        let siblings = match p.parent() {
            None => &mut roots,
            Some(parent) => &mut find_mut(&mut roots, &parent).expect("parent first").children,
        };
        siblings.push(node);
    }
    fn set_initials(prefix: Option<&Ident>, nodes: &mut [StateNode], hints: &InferenceHints) {
        for n in nodes {
            let path = prefix.map_or_else(|| n.name.clone(), |p| p.child(n.name.as_str()));
            if n.is_composite() {
                let hinted = hints.composite.get(&path).filter(|c| c.parent().as_ref() == Some(&path));
                n.initial_child = Some(match hinted {
                    Some(c) => Ident::new(c.local()).expect("segment"),
                    None => n.children[0].name.clone(),
                });
                set_initials(Some(&path), &mut n.children, hints);
            }
        }
    }
    set_initials(None, &mut roots, hints);
    roots
}

fn find_mut<'a>(nodes: &'a mut [StateNode], path: &Ident) -> Option<&'a mut StateNode> {
    let mut segs = path.segments();
    let first = segs.next()?;
    let mut cur = nodes.iter_mut().find(|n| n.name.as_str() == first)?;
    for s in segs {
        cur = cur.children.iter_mut().find(|n| n.name.as_str() == s)?;
    }
    Some(cur)
}

/// The part of `trace` between the exit and entry actions that `mode` of
/// `t` performs in `model`, or `None` when those do not bracket it.
fn middle(model: &ProcessModel, t: &TransitionDecl, mode: &FiringMode, trace: &[Ident]) -> Option<Vec<Ident>> {
    let mut skel = t.clone();
    for b in &mut skel.inputs {
        b.actions.clear();
    }
    for b in &mut skel.outputs {
        b.actions.clear();
    }
    let mark = Ident::new(MARK).expect("mark");
    skel.shared_actions = vec![mark.clone()];
    let sources: Vec<Ident> = mode.inputs.iter().map(|&i| t.inputs[i].source.clone()).collect();
    let cfg = Configuration::from_states(model, &sources).unwrap_or_default();
    let bracket = effect(model, &cfg, &skel, mode).trace;
    let pos = bracket.iter().position(|a| *a == mark)?;
    let (pre, post) = (&bracket[..pos], &bracket[pos + 1..]);
    (trace.len() >= pre.len() + post.len() && trace.starts_with(pre) && trace.ends_with(post))
        .then(|| trace[pre.len()..trace.len() - post.len()].to_vec())
}

fn common_suffix(seqs: &[Vec<Ident>]) -> Vec<Ident> {
    let Some(first) = seqs.first() else { return Vec::new() };
    let mut n = first.len();
    for s in &seqs[1..] {
        n = n.min(s.iter().rev().zip(first.iter().rev()).take_while(|(a, b)| a == b).count());
    }
    first[first.len() - n..].to_vec()
}

fn common_prefix(seqs: &[Vec<Ident>]) -> Vec<Ident> {
    let Some(first) = seqs.first() else { return Vec::new() };
    let mut n = first.len();
    for s in &seqs[1..] {
        n = n.min(s.iter().zip(first).take_while(|(a, b)| a == b).count());
    }
    first[..n].to_vec()
}

fn guard(lits: &[Literal]) -> Option<GuardExpr> {
    (!lits.is_empty()).then(|| GuardExpr::new(lits.to_vec()))
}

fn blank(id: Ident, sources: &[Ident], targets: &[Ident]) -> TransitionDecl {
    TransitionDecl {
        id,
        inputs: sources.iter().cloned().map(InBranch::new).collect(),
        split: if targets.len() > 1 { SplitKind::And } else { SplitKind::None },
        join: if sources.len() > 1 { JoinKind::And } else { JoinKind::None },
        shared_event: None,
        shared_guard: None,
        shared_actions: Vec::new(),
        outputs: targets.iter().cloned().map(OutBranch::new).collect(),
    }
}

/// Puts one event on each input in order and a leftover on the shared
/// trigger.
fn distribute_events(t: &mut TransitionDecl, events: &[Ident], at: &str, diags: &mut Vec<Diagnostic>) {
    let n = t.inputs.len();
    for (b, e) in t.inputs.iter_mut().zip(events) {
        b.event = Some(e.clone());
    }
    t.shared_event = events.get(n).cloned();
    if events.len() > n + 1 {
        diags.push(Diagnostic::error(
            DiagCode::TooManyEvents,
            at,
            format!("{} events for {n} input(s); extra events dropped", events.len()),
        ));
    }
}

/// Firing mode of `t` that a row describes: the inputs it lists and the
/// outputs whose target leaf it lists.
fn row_mode(model: &ProcessModel, t: &TransitionDecl, r: &Row) -> FiringMode {
    let inputs = (0..t.inputs.len()).filter(|&i| r.states.contains(&t.inputs[i].source)).collect();
    let outputs = if t.split == SplitKind::Or {
        (0..t.outputs.len())
            .filter(|&o| r.targets.contains(&model.default_leaf(&t.outputs[o].target)))
            .collect()
    } else {
        (0..t.outputs.len()).collect()
    };
    FiringMode { inputs, outputs }
}

fn inconsistent(at: &Ident, what: impl Into<String>) -> Diagnostic {
    Diagnostic::error(DiagCode::InconsistentTrace, at, what)
}

/// The actions `row` performs between exits and entries under `mode`.
fn row_middle(model: &ProcessModel, t: &TransitionDecl, r: &Row, diags: &mut Vec<Diagnostic>) -> Vec<Ident> {
    let mode = row_mode(model, t, r);
    middle(model, t, &mode, &r.actions).unwrap_or_else(|| {
        diags.push(inconsistent(&t.id, format!("scenario `{}`: exit/entry actions do not bracket the trace", r.name)));
        r.actions.clone()
    })
}

/// Rebuilds one transition from all scenarios naming it.
fn traced_transition(model: &ProcessModel, kind: PatternKind, id: Ident, rows: &[&Row], diags: &mut Vec<Diagnostic>) -> TransitionDecl {
    use PatternKind::*;
    let first = rows[0];
    let single_input = matches!(kind, Sequence | ExclusiveChoice | ParallelSplit | MultipleChoice);
    let multi_mode = matches!(kind, SimpleMerge | MultipleMerge) || (kind == SynchronizeMerge && rows.len() > 1);
    if (single_input && kind != MultipleChoice || !multi_mode && !single_input) && rows.len() > 1 {
        diags.push(inconsistent(&id, format!("{} scenarios for a single-mode {kind}", rows.len())));
    }
    if multi_mode {
        return traced_merge(model, kind, id, rows, diags);
    }
    if kind == MultipleChoice {
        return traced_choice(model, id, rows, diags);
    }
    let mut t = blank(id.clone(), &first.states, &first.targets);
    if single_input && t.inputs.len() != 1 {
        diags.push(inconsistent(&id, format!("{kind} needs exactly one GIVEN state")));
    }
    t.split = if kind == ParallelSplit || t.outputs.len() > 1 { SplitKind::And } else { SplitKind::None };
    distribute_events(&mut t, &first.events, id.as_str(), diags);
    if t.split == SplitKind::None && t.join == JoinKind::None {
        t.outputs[0].guard = guard(&first.lits);
    } else {
        t.shared_guard = guard(&first.lits);
    }
    t.shared_actions = row_middle(model, &t, first, diags);
    t
}

/// Or-, xor- and multi-joins: one scenario per input subset or per input.
fn traced_merge(model: &ProcessModel, kind: PatternKind, id: Ident, rows: &[&Row], diags: &mut Vec<Diagnostic>) -> TransitionDecl {
    let widest = rows.iter().max_by_key(|r| r.states.len()).expect("rows");
    let sources: Vec<Ident> = if kind == PatternKind::SynchronizeMerge {
        widest.states.clone()
    } else {
        rows.iter().flat_map(|r| r.states.iter().cloned()).collect()
    };
    let mut t = blank(id.clone(), &sources, &rows[0].targets);
    t.join = match kind {
        PatternKind::SimpleMerge => JoinKind::Xor,
        PatternKind::MultipleMerge => JoinKind::Multi,
        _ => JoinKind::Or,
    };
    let singles: Vec<&Row> = sources
        .iter()
        .map(|s| {
            rows.iter().copied().find(|r| r.states == [s.clone()]).unwrap_or_else(|| {
                diags.push(inconsistent(&id, format!("no single-input scenario for `{s}`")));
                rows[0]
            })
        })
        .collect();
    let mut shared: Vec<Ident> = singles[0].events.clone();
    shared.retain(|e| singles.iter().all(|r| r.events.contains(e)));
    if shared.len() > 1 {
        diags.push(Diagnostic::error(DiagCode::TooManyEvents, &id, "more than one event common to every input"));
    }
    t.shared_event = shared.first().cloned();
    for (b, r) in t.inputs.iter_mut().zip(&singles) {
        let own: Vec<&Ident> = r.events.iter().filter(|e| !shared.contains(e)).collect();
        if own.len() > 1 {
            diags.push(Diagnostic::error(DiagCode::TooManyEvents, &id, format!("input `{}` has {} events", b.source, own.len())));
        }
        b.event = own.first().map(|e| (*e).clone());
    }
    t.shared_guard = guard(&rows[0].lits);
    let middles: Vec<Vec<Ident>> = singles.iter().map(|r| row_middle(model, &t, r, diags)).collect();
    let tail = common_suffix(&middles);
    for (b, m) in t.inputs.iter_mut().zip(&middles) {
        b.actions = m[..m.len() - tail.len()].to_vec();
    }
    t.shared_actions = tail;
    t
}

/// Or-split: one scenario per realizable output subset.
fn traced_choice(model: &ProcessModel, id: Ident, rows: &[&Row], diags: &mut Vec<Diagnostic>) -> TransitionDecl {
    let full = rows.iter().max_by_key(|r| r.targets.len()).expect("rows");
    let mut t = blank(id.clone(), &full.states, &full.targets);
    t.split = SplitKind::Or;
    distribute_events(&mut t, &full.events, id.as_str(), diags);
    let always: Vec<Ident> = full.targets.iter().filter(|x| rows.iter().all(|r| r.targets.contains(x))).cloned().collect();
    if rows.len() == 1 {
        // one guarded output; which one cannot be told apart
        t.outputs[0].guard = guard(&full.lits);
        for o in &mut t.outputs[1..] {
            o.mandatory = true;
        }
    } else {
        let shared: Vec<Literal> = full.lits.iter().filter(|l| rows.iter().all(|r| r.lits.contains(l))).cloned().collect();
        t.shared_guard = guard(&shared);
        for o in &mut t.outputs {
            if always.contains(&o.target) {
                o.mandatory = true;
                continue;
            }
            let single = rows.iter().find(|r| r.targets.len() == always.len() + 1 && r.targets.contains(&o.target));
            let lits: Vec<Literal> = match single {
                Some(r) => full.lits.iter().filter(|l| r.lits.contains(l) && !shared.contains(l)).cloned().collect(),
                None => Vec::new(),
            };
            if lits.is_empty() {
                diags.push(inconsistent(&id, format!("cannot recover the guard of output `{}`", o.target)));
            }
            o.guard = guard(&lits);
        }
    }
    let middles: Vec<(FiringMode, Vec<Ident>)> = rows
        .iter()
        .map(|r| (row_mode(model, &t, r), row_middle(model, &t, r, diags)))
        .collect();
    let head = common_prefix(&middles.iter().map(|(_, m)| m.clone()).collect::<Vec<_>>());
    t.shared_actions = head.clone();
    let rests: Vec<(Vec<usize>, Vec<Ident>)> = middles.into_iter().map(|(m, v)| (m.outputs, v[head.len()..].to_vec())).collect();
    let full_rest = rests.iter().max_by_key(|(o, _)| o.len()).map(|(_, v)| v.clone()).unwrap_or_default();
    match segment(&rests, &full_rest, t.outputs.len()) {
        Some(segs) => {
            for (o, s) in t.outputs.iter_mut().zip(segs) {
                o.actions = s;
            }
        }
        None => diags.push(inconsistent(&id, "output actions cannot be separated")),
    }
    t
}

/// Splits `full` into one segment per output so that every row's actions
/// are the concatenation of its outputs' segments.
fn segment(rows: &[(Vec<usize>, Vec<Ident>)], full: &[Ident], n: usize) -> Option<Vec<Vec<Ident>>> {
    fn go(rows: &[(Vec<usize>, Vec<Ident>)], full: &[Ident], n: usize, o: usize, at: usize, cursors: &mut Vec<usize>, acc: &mut Vec<Vec<Ident>>) -> bool {
        if o == n {
            return at == full.len() && rows.iter().zip(cursors.iter()).all(|((_, v), &c)| c == v.len());
        }
        for end in at..=full.len() {
            let seg = &full[at..end];
            let fits = rows
                .iter()
                .zip(cursors.iter())
                .all(|((outs, v), &c)| !outs.contains(&o) || v[c..].starts_with(seg));
            if !fits {
                continue;
            }
            let saved = cursors.clone();
            for ((outs, _), c) in rows.iter().zip(cursors.iter_mut()) {
                if outs.contains(&o) {
                    *c += seg.len();
                }
            }
            acc.push(seg.to_vec());
            if go(rows, full, n, o + 1, end, cursors, acc) {
                return true;
            }
            acc.pop();
            *cursors = saved;
        }
        false
    }
    let mut cursors = vec![0; rows.len()];
    let mut acc = Vec::new();
    go(rows, full, n, 0, 0, &mut cursors, &mut acc).then_some(acc)
}

/// Untraced rows with their actions stripped of known exit/entry actions.
fn strip(model: &ProcessModel, r: &Row) -> Row {
    let mut r = r.clone();
    if r.states.is_empty() {
        return r;
    }
    let targets = if r.targets.is_empty() { vec![model.final_name.clone()] } else { r.targets.clone() };
    let t = blank(Ident::new(MARK).expect("mark"), &r.states, &targets);
    let mode = FiringMode { inputs: (0..t.inputs.len()).collect(), outputs: (0..t.outputs.len()).collect() };
    if let Some(m) = middle(model, &t, &mode, &r.actions) {
        r.actions = m;
    }
    r
}

fn sink_name(scenario: &str) -> Ident {
    let slug: String = scenario.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' }).collect();
    Ident::new(format!("_after_{slug}")).expect("sink name")
}

/// Output index and sink name for rows whose target is missing.
type Sinks = Vec<(usize, String)>;

/// A transition built from untraced rows, awaiting an id and sinks.
struct Folded {
    first_row: usize,
    t: TransitionDecl,
    /// Scenario names for outputs that lack a target.
    sinks: Sinks,
}

fn positive(lits: &[Literal]) -> BTreeSet<Ident> {
    lits.iter().filter(|l| !l.negated).map(|l| l.atom.clone()).collect()
}

/// Rows sharing GIVEN states and events whose positive guard atoms run
/// over every nonempty subset of some atom set.
fn fold_or_split(rows: &[&Row], diags: &mut Vec<Diagnostic>) -> Option<Folded> {
    if rows.len() < 3 {
        return None;
    }
    let mut atoms: Vec<Ident> = Vec::new();
    for r in rows {
        for a in positive(&r.lits) {
            if !atoms.contains(&a) {
                atoms.push(a);
            }
        }
    }
    let n = atoms.len();
    if n > 10 || rows.len() != (1 << n) - 1 {
        return None;
    }
    let sets: BTreeSet<BTreeSet<Ident>> = rows.iter().map(|r| positive(&r.lits)).collect();
    let clean = rows.iter().all(|r| {
        let p = positive(&r.lits);
        !p.is_empty() && r.lits.iter().filter(|l| l.negated).all(|l| atoms.contains(&l.atom) && !p.contains(&l.atom))
    });
    if sets.len() != rows.len() || !clean {
        return None;
    }
    let head = common_prefix(&rows.iter().map(|r| r.actions.clone()).collect::<Vec<_>>());
    let mut t = blank(Ident::new(MARK).expect("mark"), &rows[0].states, &[]);
    t.split = SplitKind::Or;
    distribute_events(&mut t, &rows[0].events, &rows[0].name, diags);
    t.shared_actions = head.clone();
    let mut sinks = Vec::new();
    for a in &atoms {
        let single = rows.iter().find(|r| positive(&r.lits) == BTreeSet::from([a.clone()])).expect("all subsets");
        let target = match single.targets.as_slice() {
            [one] => one.clone(),
            _ => {
                sinks.push((t.outputs.len(), single.name.clone()));
                Ident::new(MARK).expect("mark")
            }
        };
        let mut o = OutBranch::new(target);
        o.guard = Some(GuardExpr::atom(a.clone()));
        o.actions = single.actions[head.len()..].to_vec();
        t.outputs.push(o);
    }
    Some(Folded { first_row: rows[0].index, t, sinks })
}

/// Rows sharing GIVEN and WHEN that name disjoint target states.
fn fold_and_split(rows: &[&Row], diags: &mut Vec<Diagnostic>) -> Option<Folded> {
    if rows.len() < 2 || rows.iter().any(|r| r.targets.is_empty() || r.lits != rows[0].lits) {
        return None;
    }
    let mut targets: Vec<Ident> = Vec::new();
    for r in rows {
        for x in &r.targets {
            if targets.contains(x) {
                return None;
            }
            targets.push(x.clone());
        }
    }
    let head = common_prefix(&rows.iter().map(|r| r.actions.clone()).collect::<Vec<_>>());
    let mut t = blank(Ident::new(MARK).expect("mark"), &rows[0].states, &targets);
    t.split = SplitKind::And;
    distribute_events(&mut t, &rows[0].events, &rows[0].name, diags);
    t.shared_actions = head.clone();
    t.shared_guard = guard(&rows[0].lits);
    for r in rows {
        let k = targets.iter().position(|x| *x == r.targets[0]).expect("listed");
        t.outputs[k].actions = r.actions[head.len()..].to_vec();
    }
    Some(Folded { first_row: rows[0].index, t, sinks: Vec::new() })
}

/// Rows from distinct, unrelated single states that end in the same
/// actions and name the same targets: an and-join by default.
fn fold_join(rows: &[&Row], diags: &mut Vec<Diagnostic>) -> Option<Folded> {
    let seqs: Vec<Vec<Ident>> = rows.iter().map(|r| r.actions.clone()).collect();
    let tail = common_suffix(&seqs);
    let mut t = blank(Ident::new(MARK).expect("mark"), &rows.iter().map(|r| r.states[0].clone()).collect::<Vec<_>>(), &rows[0].targets);
    t.join = JoinKind::And;
    let mut shared_ev: Vec<Ident> = rows[0].events.clone();
    shared_ev.retain(|e| rows.iter().all(|r| r.events.contains(e)));
    if shared_ev.len() > 1 {
        diags.push(Diagnostic::error(DiagCode::TooManyEvents, &rows[0].name, "more than one event common to every input"));
    }
    t.shared_event = shared_ev.first().cloned();
    let shared_lits: Vec<Literal> = rows[0].lits.iter().filter(|l| rows.iter().all(|r| r.lits.contains(l))).cloned().collect();
    t.shared_guard = guard(&shared_lits);
    for (b, r) in t.inputs.iter_mut().zip(rows) {
        let own: Vec<&Ident> = r.events.iter().filter(|e| !shared_ev.contains(e)).collect();
        if own.len() > 1 {
            diags.push(Diagnostic::error(DiagCode::TooManyEvents, &r.name, format!("{} events for one input", own.len())));
        }
        b.event = own.first().map(|e| (*e).clone());
        b.actions = r.actions[..r.actions.len() - tail.len()].to_vec();
    }
    t.shared_actions = tail;
    diags.push(Diagnostic::warning(
        DiagCode::AmbiguousJoin,
        rows.iter().map(|r| r.name.as_str()).collect::<Vec<_>>().join(", "),
        "merge kind undecidable from per-input scenarios; read as an and-join",
    ));
    let sinks = if rows[0].targets.is_empty() { vec![(0, rows[0].name.clone())] } else { Vec::new() };
    if !sinks.is_empty() {
        t.outputs = vec![OutBranch::new(Ident::new(MARK).expect("mark"))];
    }
    Some(Folded { first_row: rows[0].index, t, sinks })
}

fn fold_single(r: &Row, hints: &InferenceHints, diags: &mut Vec<Diagnostic>) -> Folded {
    let sources = if r.states.is_empty() {
        diags.push(Diagnostic::warning(DiagCode::AmbiguousTerm, &r.name, "no GIVEN state; starting from the initial pseudostate"));
        vec![hints.initial()]
    } else {
        r.states.clone()
    };
    let (targets, sinks) = if r.targets.is_empty() {
        (vec![Ident::new(MARK).expect("mark")], vec![(0, r.name.clone())])
    } else {
        (r.targets.clone(), Vec::new())
    };
    let mut t = blank(Ident::new(MARK).expect("mark"), &sources, &targets);
    distribute_events(&mut t, &r.events, &r.name, diags);
    if t.split == SplitKind::None && t.join == JoinKind::None {
        t.outputs[0].guard = guard(&r.lits);
    } else {
        t.shared_guard = guard(&r.lits);
    }
    t.shared_actions = r.actions.clone();
    Folded { first_row: r.index, t, sinks }
}

fn unrelated(a: &Ident, b: &Ident) -> bool {
    common_prefix_len(a, b) == 0
}

fn fold_untraced(rows: &[Row], hints: &InferenceHints, diags: &mut Vec<Diagnostic>) -> Vec<Folded> {
    let mut used = vec![false; rows.len()];
    let mut out = Vec::new();
    let groups = |used: &[bool], key: &dyn Fn(&Row) -> Option<String>| {
        let mut g: Vec<(String, Vec<usize>)> = Vec::new();
        for (i, r) in rows.iter().enumerate().filter(|(i, _)| !used[*i]) {
            let Some(k) = key(r) else { continue };
            match g.iter_mut().find(|(x, _)| *x == k) {
                Some((_, v)) => v.push(i),
                None => g.push((k, vec![i])),
            }
        }
        g
    };
    let nonempty = |r: &Row| !r.states.is_empty();
    for (_, idx) in groups(&used, &|r| nonempty(r).then(|| format!("{:?} {:?}", r.states, r.events))) {
        let members: Vec<&Row> = idx.iter().map(|&i| &rows[i]).collect();
        if let Some(f) = fold_or_split(&members, diags) {
            idx.iter().for_each(|&i| used[i] = true);
            out.push(f);
        }
    }
    let key = |r: &Row| (nonempty(r) && !r.targets.is_empty()).then(|| format!("{:?} {:?} {:?}", r.states, r.events, r.lits));
    for (_, idx) in groups(&used, &key) {
        let members: Vec<&Row> = idx.iter().map(|&i| &rows[i]).collect();
        if let Some(f) = fold_and_split(&members, diags) {
            idx.iter().for_each(|&i| used[i] = true);
            out.push(f);
        }
    }
    for i in 0..rows.len() {
        if used[i] || rows[i].states.len() != 1 {
            continue;
        }
        let mut group = vec![i];
        for j in i + 1..rows.len() {
            let r = &rows[j];
            if used[j] || r.states.len() != 1 || r.targets != rows[i].targets {
                continue;
            }
            if !group.iter().all(|&g| unrelated(&rows[g].states[0], &r.states[0])) {
                continue;
            }
            let mut seqs: Vec<Vec<Ident>> = group.iter().map(|&g| rows[g].actions.clone()).collect();
            seqs.push(r.actions.clone());
            if !common_suffix(&seqs).is_empty() {
                group.push(j);
            }
        }
        if group.len() > 1 {
            let members: Vec<&Row> = group.iter().map(|&g| &rows[g]).collect();
            if let Some(f) = fold_join(&members, diags) {
                group.iter().for_each(|&g| used[g] = true);
                out.push(f);
            }
        }
    }
    for (i, r) in rows.iter().enumerate() {
        if !used[i] {
            out.push(fold_single(r, hints, diags));
        }
    }
    out
}

/// Infers a model from a parsed document; `hints` add to the document's
/// own hint block and win on conflicts. Never fails: every ambiguity or
/// inconsistency is reported as a diagnostic.
pub fn infer_model(doc: &FeatureDoc, hints: &InferenceHints) -> (ProcessModel, Vec<Diagnostic>) {
    let mut h = doc.hints.clone();
    h.merge(hints);
    let mut diags = Vec::new();
    let rows = build_rows(doc, &h, &mut diags);
    let mut model = ProcessModel::new(doc.title.clone());
    model.role = doc.role.clone();
    model.feature = doc.feature.clone();
    model.benefit = doc.benefit.clone();
    model.initial_name = h.initial();
    model.final_name = h.final_();
    model.states = state_forest(&rows, &h);

    let mut traced: Vec<(PatternKind, Ident, Vec<&Row>)> = Vec::new();
    let mut plain: Vec<Row> = Vec::new();
    for r in &rows {
        let Some((kind, id)) = &r.traced else {
            plain.push(strip(&model, r));
            continue;
        };
        match traced.iter_mut().find(|(_, x, _)| x == id) {
            Some((k, _, v)) => {
                if k != kind {
                    diags.push(inconsistent(id, format!("scenario `{}` names kind {kind}, earlier ones {k}", r.name)));
                }
                v.push(r);
            }
            None => traced.push((*kind, id.clone(), vec![r])),
        }
    }
    // (first row, traced, transition, sinks to add)
    let mut built: Vec<(usize, bool, TransitionDecl, Sinks)> = Vec::new();
    for (kind, id, group) in &traced {
        let t = traced_transition(&model, *kind, id.clone(), group, &mut diags);
        built.push((group[0].index, true, t, Vec::new()));
    }
    for f in fold_untraced(&plain, &h, &mut diags) {
        built.push((f.first_row, false, f.t, f.sinks));
    }
    built.sort_by_key(|b| b.0);

    let mut ids: BTreeSet<Ident> = built.iter().filter(|b| b.1).map(|b| b.2.id.clone()).collect();
    let mut next = 0;
    let mut taken: BTreeSet<Ident> = model.state_paths().into_iter().map(|(p, _)| p).collect();
    for (_, is_traced, t, sinks) in &mut built {
        if !*is_traced {
            t.id = loop {
                next += 1;
                let id = Ident::new(format!("t{next}")).expect("id");
                if ids.insert(id.clone()) {
                    break id;
                }
            };
        }
        for (o, scenario) in sinks.iter() {
            let base = sink_name(scenario);
            let mut name = base.clone();
            let mut n = 1;
            while taken.contains(&name) {
                n += 1;
                name = Ident::new(format!("{base}_{n}")).expect("sink name");
            }
            taken.insert(name.clone());
            model.states.push(StateNode::simple(name.clone()));
            t.outputs[*o].target = name;
        }
    }
    model.transitions = built.into_iter().map(|b| b.2).collect();

    for (_, id, group) in &traced {
        let t = model.transition(id).expect("built");
        for r in group {
            let mode = row_mode(&model, t, r);
            let cfg = Configuration::from_states(&model, &r.states).unwrap_or_default();
            let eff = effect(&model, &cfg, t, &mode);
            let entered: BTreeSet<&Ident> = eff.entered.iter().collect();
            if eff.trace != r.actions || entered != r.targets.iter().collect() {
                diags.push(inconsistent(id, format!("scenario `{}` is not reproduced by the inferred transition", r.name)));
            }
        }
    }
    for d in validate(&model).into_iter().filter(|d| d.is_error()) {
        diags.push(Diagnostic::error(DiagCode::InvalidInferredModel, &d.location, d.to_string()));
    }
    (model, diags)
}
