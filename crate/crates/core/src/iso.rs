//! Structural isomorphism of process models.
//!
//! Two models are isomorphic when their state forests agree (paths,
//! nesting, initial children, entry and exit actions, pseudostate names)
//! and their transitions form equal multisets of behaviour signatures.
//! A signature holds the pattern kind, join and split kinds, and one row
//! per firing mode: sorted sources, event set, guard literal set, action
//! trace and entered leaves. Transition ids and the placement of actions
//! among branches do not matter.

use std::collections::BTreeSet;

use crate::model::ProcessModel;
use crate::pattern::classify;
use crate::replay::{effect, firing_modes, mode_stimulus, Configuration};

fn forest(model: &ProcessModel) -> Vec<String> {
    let mut v: Vec<String> = model
        .state_paths()
        .into_iter()
        .map(|(path, n)| {
            let init = n.initial_child.as_ref().map(|c| c.to_string()).unwrap_or_default();
            format!(
                "{path} composite={} initial={init} entry={:?} exit={:?}",
                n.is_composite(),
                n.entry_actions,
                n.exit_actions
            )
        })
        .collect();
    v.sort();
    v.push(format!("pseudo {} {}", model.initial_name, model.final_name));
    v
}

/// Canonical behaviour signature of every transition, sorted.
pub fn behaviour_table(model: &ProcessModel) -> Vec<String> {
    let classes = classify(model);
    let mut out: Vec<String> = model
        .transitions
        .iter()
        .map(|t| {
            let kind = classes.kind_of(&t.id).expect("classified");
            let mut rows: Vec<String> = firing_modes(t)
                .into_iter()
                .filter_map(|m| {
                    let (events, lits) = mode_stimulus(t, &m)?;
                    let mut sources: Vec<String> = m.inputs.iter().map(|&i| t.inputs[i].source.to_string()).collect();
                    sources.sort();
                    let events: BTreeSet<String> = events.iter().map(|e| e.to_string()).collect();
                    let lits: BTreeSet<String> = lits.iter().map(|l| l.to_string()).collect();
                    let srcs: Vec<_> = m.inputs.iter().map(|&i| t.inputs[i].source.clone()).collect();
                    let cfg = Configuration::from_states(model, &srcs).unwrap_or_default();
                    let eff = effect(model, &cfg, t, &m);
                    Some(format!("{sources:?} {events:?} {lits:?} {:?} {:?}", eff.trace, eff.entered))
                })
                .collect();
            rows.sort();
            format!("{kind} join={} split={} {rows:?}", t.join.keyword(), t.split.keyword())
        })
        .collect();
    out.sort();
    out
}

/// First difference between two models, or `None` when isomorphic.
pub fn iso_difference(a: &ProcessModel, b: &ProcessModel) -> Option<String> {
    let (fa, fb) = (forest(a), forest(b));
    if fa != fb {
        return Some(first_diff("state", &fa, &fb));
    }
    let (ta, tb) = (behaviour_table(a), behaviour_table(b));
    if ta != tb {
        return Some(first_diff("transition", &ta, &tb));
    }
    None
}

pub fn isomorphic(a: &ProcessModel, b: &ProcessModel) -> bool {
    iso_difference(a, b).is_none()
}

fn first_diff(what: &str, a: &[String], b: &[String]) -> String {
    let only_a: Vec<&String> = a.iter().filter(|x| !b.contains(x)).collect();
    let only_b: Vec<&String> = b.iter().filter(|x| !a.contains(x)).collect();
    format!("{what} mismatch: left only {only_a:?}, right only {only_b:?}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_dsl;

    #[test]
    fn action_placement_and_ids_are_irrelevant() {
        let a = parse_dsl("process \"p\" { state S1 state S2 trans t1 { from S1 on e do x to S2 } }").unwrap();
        let b = parse_dsl("process \"p\" { state S1 state S2 trans k9 { from S1 on e to S2 do x } }").unwrap();
        assert!(isomorphic(&a, &b));
    }

    #[test]
    fn differing_trace_is_detected() {
        let a = parse_dsl("process \"p\" { state S1 state S2 trans t1 { from S1 on e do x to S2 } }").unwrap();
        let b = parse_dsl("process \"p\" { state S1 state S2 trans t1 { from S1 on e do y to S2 } }").unwrap();
        assert!(iso_difference(&a, &b).unwrap().starts_with("transition"));
    }
}
