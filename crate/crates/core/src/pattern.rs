//! Workflow-pattern classification and semantic lint.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::ident::{GuardExpr, Ident, Literal};
use crate::model::{JoinKind, PatternKind, ProcessModel, SplitKind, TransitionDecl};
use crate::validate::{DiagCode, Diagnostic};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternInstance {
    pub kind: PatternKind,
    pub transition_id: Ident,
    pub notes: Vec<String>,
}

/// A state-level special case: entry/exit actions or nesting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StateCase {
    pub kind: PatternKind,
    pub state: Ident,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub transitions: Vec<PatternInstance>,
    pub states: Vec<StateCase>,
}

impl Classification {
    pub fn kind_of(&self, id: &Ident) -> Option<PatternKind> {
        self.transitions.iter().find(|p| p.transition_id == *id).map(|p| p.kind)
    }
}

/// Default leaves of or-split targets, i.e. states whose activation may
/// be partial.
pub fn or_split_targets(model: &ProcessModel) -> BTreeSet<Ident> {
    model
        .transitions
        .iter()
        .filter(|t| t.split == SplitKind::Or)
        .flat_map(|t| t.targets().map(|x| model.default_leaf(x)))
        .collect()
}

fn is_plain(t: &TransitionDecl) -> bool {
    t.inputs.len() == 1 && t.outputs.len() == 1 && t.join == JoinKind::None && t.split == SplitKind::None
}

fn competes(model: &ProcessModel, t: &TransitionDecl) -> bool {
    is_plain(t)
        && t.is_guarded()
        && model.transitions.iter().any(|o| {
            o.id != t.id && is_plain(o) && o.is_guarded() && o.inputs[0].source == t.inputs[0].source
        })
}

fn classify_transition(model: &ProcessModel, fed: &BTreeSet<Ident>, t: &TransitionDecl) -> PatternInstance {
    let mut notes = Vec::new();
    let kind = match t.join {
        JoinKind::And => {
            if let Some(s) = t.sources().find(|s| fed.contains(&model.default_leaf(s))) {
                notes.push(format!("input `{s}` is fed by an or-split"));
                PatternKind::SynchronizeMerge
            } else {
                PatternKind::Synchronization
            }
        }
        JoinKind::Or => PatternKind::SynchronizeMerge,
        JoinKind::Xor => PatternKind::SimpleMerge,
        JoinKind::Multi => PatternKind::MultipleMerge,
        JoinKind::None => match t.split {
            SplitKind::And => PatternKind::ParallelSplit,
            SplitKind::Or => PatternKind::MultipleChoice,
            SplitKind::None if competes(model, t) => PatternKind::ExclusiveChoice,
            SplitKind::None => PatternKind::Sequence,
        },
    };
    if t.join != JoinKind::None && t.split != SplitKind::None {
        notes.push(format!("also splits ({})", t.split.keyword()));
    }
    PatternInstance { kind, transition_id: t.id.clone(), notes }
}

/// Assigns each transition exactly one pattern and lists state-level cases.
pub fn classify(model: &ProcessModel) -> Classification {
    let fed = or_split_targets(model);
    let transitions = model
        .transitions
        .iter()
        .map(|t| classify_transition(model, &fed, t))
        .collect();
    let mut states = Vec::new();
    for (path, node) in model.state_paths() {
        if !node.entry_actions.is_empty() || !node.exit_actions.is_empty() {
            states.push(StateCase { kind: PatternKind::EntryExitCase, state: path.clone() });
        }
        if node.is_composite() {
            states.push(StateCase { kind: PatternKind::EmbeddedStates, state: path });
        }
    }
    Classification { transitions, states }
}

/// Paths reachable from `start` by firing transitions. Entering a state
/// also reaches its ancestors and its default descendants. A join needs
/// every input for `and`, any input otherwise.
pub fn reachable(model: &ProcessModel, start: &[Ident]) -> BTreeSet<Ident> {
    let mut reached: BTreeSet<Ident> = BTreeSet::new();
    let add = |reached: &mut BTreeSet<Ident>, p: &Ident| {
        for n in 1..=p.depth() {
            reached.insert(p.prefix(n));
        }
        for d in model.default_descent(p) {
            reached.insert(d);
        }
    };
    for s in start {
        add(&mut reached, s);
    }
    loop {
        let before = reached.len();
        for t in &model.transitions {
            let hit = |s: &Ident| reached.contains(s);
            let fires = match t.join {
                JoinKind::And => t.sources().all(hit),
                _ => t.sources().any(hit),
            };
            if fires {
                let targets: Vec<Ident> = t.targets().cloned().collect();
                for tg in &targets {
                    add(&mut reached, tg);
                }
            }
        }
        if reached.len() == before {
            return reached;
        }
    }
}

/// The or-split whose outputs feed an or-join, if any: the first or-split
/// in declaration order from whose targets some join input is reachable.
pub fn or_join_partner<'a>(model: &'a ProcessModel, join: &TransitionDecl) -> Option<&'a TransitionDecl> {
    model.transitions.iter().find(|t| {
        t.split == SplitKind::Or && t.id != join.id && {
            let targets: Vec<Ident> = t.targets().cloned().collect();
            let r = reachable(model, &targets);
            join.sources().any(|s| r.contains(s))
        }
    })
}

/// The conjunction that must hold for a plain transition to fire.
pub fn effective_guard(t: &TransitionDecl) -> GuardExpr {
    let lits: Vec<Literal> = t
        .shared_guard
        .iter()
        .chain(t.outputs.iter().filter_map(|o| o.guard.as_ref()))
        .flat_map(|g| g.literals.iter().cloned())
        .collect();
    GuardExpr::new(lits)
}

/// A valuation under which both guards hold, found syntactically: two
/// conjunctions overlap iff no atom appears with both polarities.
pub fn guards_overlap(a: &GuardExpr, b: &GuardExpr) -> Option<BTreeSet<Ident>> {
    if a.compatible_with(b) {
        Some(a.literals.iter().chain(&b.literals).filter(|l| !l.negated).map(|l| l.atom.clone()).collect())
    } else {
        None
    }
}

/// Semantic hazards that do not make a model invalid.
pub fn lint(model: &ProcessModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let classes = classify(model);
    let choices: Vec<&TransitionDecl> = model
        .transitions
        .iter()
        .filter(|t| classes.kind_of(&t.id) == Some(PatternKind::ExclusiveChoice))
        .collect();
    for (i, a) in choices.iter().enumerate() {
        for b in &choices[i + 1..] {
            if a.inputs[0].source != b.inputs[0].source {
                continue;
            }
            if let Some(witness) = guards_overlap(&effective_guard(a), &effective_guard(b)) {
                let val: Vec<String> = effective_guard(a)
                    .atoms()
                    .chain(effective_guard(b).atoms())
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .map(|x| format!("{x}={}", if witness.contains(x) { "T" } else { "F" }))
                    .collect();
                out.push(Diagnostic::warning(
                    DiagCode::OverlappingGuards,
                    &a.inputs[0].source,
                    format!(
                        "transitions {} and {} leaving {} can both be enabled ({})",
                        a.id,
                        b.id,
                        a.inputs[0].source,
                        val.join(", ")
                    ),
                ));
            }
        }
    }
    let reached = reachable(model, std::slice::from_ref(&model.initial_name));
    for (path, _) in model.state_paths() {
        if !reached.contains(&path) {
            out.push(Diagnostic::warning(
                DiagCode::UnreachableState,
                &path,
                format!("state {path} is not reachable from {}", model.initial_name),
            ));
        }
    }
    for t in &model.transitions {
        if t.join == JoinKind::Or && or_join_partner(model, t).is_none() {
            out.push(Diagnostic::warning(
                DiagCode::OrJoinWithoutOrSplit,
                &t.id,
                format!("or-join {} is not fed by any or-split", t.id),
            ));
        }
        if t.sources().any(|s| *s == model.final_name) {
            out.push(Diagnostic::warning(
                DiagCode::DanglingFinal,
                &t.id,
                format!("transition {} leaves the final pseudostate {}", t.id, model.final_name),
            ));
        }
    }
    out
}
