//! Model to feature-document emission.
//!
//! `PaperExact` follows the scenario shape of each workflow pattern.
//! `Strict` writes one scenario per firing mode with the full action
//! trace and the resulting leaves, so that the model can be recovered.

use itertools::Itertools;
use thiserror::Error;

use crate::feature::{FeatureDoc, InferenceHints, Scenario, Term, ThenItem};
use crate::ident::{Ident, Literal};
use crate::model::{PatternKind, ProcessModel, SplitKind, TransitionDecl};
use crate::pattern::{classify, effective_guard};
use crate::replay::{effect, firing_modes, mode_literals, mode_stimulus, step, Configuration, FiringMode};

pub const MAX_CHOICE_BRANCHES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    PaperExact,
    Strict,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error("TooManyChoiceBranches: transition {transition} has {count} guarded branches (limit {MAX_CHOICE_BRANCHES})")]
    TooManyChoiceBranches { transition: Ident, count: usize },
}

/// All nonempty subsets of `0..n`, smaller first, then in branch order.
pub fn enumerate_choice_subsets(n: usize) -> Result<Vec<Vec<usize>>, usize> {
    if n == 0 || n > MAX_CHOICE_BRANCHES {
        return Err(n);
    }
    Ok((1..=n).flat_map(|k| (0..n).combinations(k)).collect())
}

/// Hints that let the parser and inference recover every role and the
/// state hierarchy.
pub fn model_hints(model: &ProcessModel) -> InferenceHints {
    let mut h = InferenceHints {
        declared_events: model.events(),
        declared_guards: model.guards(),
        declared_actions: model.actions(),
        initial_name: Some(model.initial_name.clone()),
        final_name: Some(model.final_name.clone()),
        ..InferenceHints::default()
    };
    for (path, node) in model.state_paths() {
        if !node.entry_actions.is_empty() {
            h.entry.insert(path.clone(), node.entry_actions.clone());
        }
        if !node.exit_actions.is_empty() {
            h.exit.insert(path.clone(), node.exit_actions.clone());
        }
        if let (true, Some(c)) = (node.is_composite(), &node.initial_child) {
            h.composite.insert(path.clone(), path.child(c.as_str()));
        }
        h.declared_states.insert(path);
    }
    h
}

pub fn emit_feature(model: &ProcessModel, mode: Mode) -> Result<FeatureDoc, EmitError> {
    let classes = classify(model);
    let mut doc = FeatureDoc {
        title: model.title.clone(),
        role: model.role.clone(),
        feature: model.feature.clone(),
        benefit: model.benefit.clone(),
        scenarios: Vec::new(),
        hints: model_hints(model),
    };
    for t in &model.transitions {
        let guarded = t.outputs.iter().filter(|o| o.guard.is_some()).count();
        if t.split == SplitKind::Or && guarded > MAX_CHOICE_BRANCHES {
            return Err(EmitError::TooManyChoiceBranches { transition: t.id.clone(), count: guarded });
        }
        let kind = classes.kind_of(&t.id).expect("classified");
        let rows = match mode {
            Mode::PaperExact => paper_rows(model, t, kind),
            Mode::Strict => strict_rows(model, t),
        };
        let many = rows.len() > 1;
        for (n, (given, when, then)) in rows.into_iter().enumerate() {
            let name = if many { format!("{kind} {} {}", t.id, n + 1) } else { format!("{kind} {}", t.id) };
            doc.scenarios.push(Scenario { name, given, when, then, prose: Vec::new() });
        }
    }
    Ok(doc.normalized())
}

type Row = (Vec<Term>, Vec<Term>, Vec<ThenItem>);

fn guard_terms(lits: &[Literal]) -> Vec<Term> {
    lits.iter().map(|l| Term::guard(l.atom.clone(), l.negated)).collect()
}

fn state_terms<'a>(paths: impl IntoIterator<Item = &'a Ident>) -> Vec<Term> {
    paths.into_iter().map(|p| Term::state(p.clone())).collect()
}

fn event_terms(t: &TransitionDecl, inputs: &[usize]) -> Vec<Term> {
    inputs
        .iter()
        .filter_map(|&i| t.inputs[i].event.as_ref())
        .chain(t.shared_event.iter())
        .unique()
        .map(|e| Term::event(e.clone()))
        .collect()
}

fn separate(actions: Vec<Ident>) -> Vec<ThenItem> {
    actions.into_iter().map(|a| ThenItem::ActionSeq(vec![a])).collect()
}

/// Separate action items, or the entered leaves when nothing is traced.
fn separate_or_entered(eff: crate::replay::Effect) -> Vec<ThenItem> {
    if eff.trace.is_empty() {
        eff.entered.into_iter().map(ThenItem::StateTerm).collect()
    } else {
        separate(eff.trace)
    }
}

fn sequence(actions: Vec<Ident>) -> Vec<ThenItem> {
    if actions.is_empty() {
        Vec::new()
    } else {
        vec![ThenItem::ActionSeq(actions)]
    }
}

fn fire(model: &ProcessModel, t: &TransitionDecl, inputs: Vec<usize>, outputs: Vec<usize>) -> crate::replay::Effect {
    effect(model, &Configuration::default(), t, &FiringMode { inputs, outputs })
}

/// Rows drawn with target states: some exited state has exit actions, or
/// an endpoint is composite or nested.
fn needs_targets(model: &ProcessModel, t: &TransitionDecl) -> bool {
    let endpoint_special = t
        .sources()
        .chain(t.targets())
        .any(|p| p.depth() > 1 || !model.is_leaf(p));
    let exits = t.sources().any(|s| !model.exit_actions(s).is_empty());
    endpoint_special || exits
}

fn paper_rows(model: &ProcessModel, t: &TransitionDecl, kind: PatternKind) -> Vec<Row> {
    let all_in: Vec<usize> = (0..t.inputs.len()).collect();
    let all_out: Vec<usize> = (0..t.outputs.len()).collect();
    let guard_when = guard_terms(&effective_guard(t).literals);
    let shared_guard: Vec<Term> = t.shared_guard.iter().flat_map(|g| guard_terms(&g.literals)).collect();
    match kind {
        PatternKind::Sequence | PatternKind::ParallelSplit | PatternKind::ExclusiveChoice => {
            let given = state_terms(t.sources());
            let mut when = event_terms(t, &all_in);
            when.extend(guard_when);
            if needs_targets(model, t) {
                return all_out
                    .iter()
                    .map(|&o| {
                        let eff = fire(model, t, all_in.clone(), vec![o]);
                        let mut then = separate(eff.trace);
                        then.extend(eff.entered.into_iter().map(ThenItem::StateTerm));
                        (given.clone(), when.clone(), then)
                    })
                    .collect();
            }
            vec![(given, when, separate_or_entered(fire(model, t, all_in, all_out)))]
        }
        PatternKind::Synchronization | PatternKind::SimpleMerge => all_in
            .iter()
            .map(|&i| {
                let mut when = event_terms(t, &[i]);
                when.extend(shared_guard.clone());
                let eff = fire(model, t, vec![i], all_out.clone());
                (state_terms([&t.inputs[i].source]), when, separate_or_entered(eff))
            })
            .collect(),
        PatternKind::SynchronizeMerge => {
            let mut when = event_terms(t, &all_in);
            when.extend(shared_guard);
            let eff = fire(model, t, all_in, all_out);
            let mut then = sequence(eff.trace);
            then.extend(eff.entered.into_iter().map(ThenItem::StateTerm));
            vec![(state_terms(t.sources()), when, then)]
        }
        PatternKind::MultipleMerge => all_in
            .iter()
            .map(|&i| {
                let mut when = event_terms(t, &[i]);
                when.extend(shared_guard.clone());
                let eff = fire(model, t, vec![i], all_out.clone());
                let mut then = sequence(eff.trace);
                then.extend(eff.entered.into_iter().map(ThenItem::StateTerm));
                (state_terms([&t.inputs[i].source]), when, then)
            })
            .collect(),
        PatternKind::MultipleChoice => firing_modes(t)
            .into_iter()
            .filter_map(|m| {
                let lits = mode_literals(t, &m.outputs)?;
                let mut given = state_terms(m.inputs.iter().map(|&i| &t.inputs[i].source));
                given.extend(guard_terms(&lits));
                let when = event_terms(t, &m.inputs);
                let eff = fire(model, t, m.inputs, m.outputs);
                Some((given, when, separate_or_entered(eff)))
            })
            .collect(),
        PatternKind::EntryExitCase | PatternKind::EmbeddedStates => unreachable!("state-level kinds"),
    }
}

fn strict_rows(model: &ProcessModel, t: &TransitionDecl) -> Vec<Row> {
    firing_modes(t)
        .into_iter()
        .filter_map(|m| {
            let (events, lits) = mode_stimulus(t, &m)?;
            let sources: Vec<Ident> = m.inputs.iter().map(|&i| t.inputs[i].source.clone()).collect();
            let mut given = state_terms(&sources);
            let when = if events.is_empty() {
                guard_terms(&lits)
            } else {
                given.extend(guard_terms(&lits));
                events.iter().map(|e| Term::event(e.clone())).collect()
            };
            let (trace, leaves) = strict_outcome(model, t, &m, &sources, &events, &lits);
            let mut then = sequence(trace);
            then.extend(leaves.into_iter().map(ThenItem::StateTerm));
            Some((given, when, then))
        })
        .collect()
}

/// Trace and resulting leaves (entered first) of one mode, as the replay
/// engine computes them from a configuration holding just the sources.
fn strict_outcome(
    model: &ProcessModel,
    t: &TransitionDecl,
    m: &FiringMode,
    sources: &[Ident],
    events: &[Ident],
    lits: &[Literal],
) -> (Vec<Ident>, Vec<Ident>) {
    let val = lits.iter().filter(|l| !l.negated).map(|l| l.atom.clone()).collect();
    let evs = events.iter().cloned().collect();
    let stepped = Configuration::from_states(model, sources)
        .ok()
        .and_then(|cfg| step(model, &cfg, &evs, &val).ok())
        .filter(|r| r.fired.contains(&t.id));
    match stepped {
        Some(r) => {
            let mut rest = r.after.leaves();
            let mut leaves = Vec::new();
            for e in &r.entered {
                if let Some(k) = rest.iter().position(|x| x == e) {
                    leaves.push(rest.remove(k));
                }
            }
            leaves.extend(rest);
            (r.trace, leaves)
        }
        None => {
            let eff = fire(model, t, m.inputs.clone(), m.outputs.clone());
            (eff.trace, eff.entered)
        }
    }
}
