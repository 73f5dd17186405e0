//! Operational semantics: configurations, firing, scenario replay,
//! suite checking and bounded exploration.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::emit::Mode;
use crate::feature::{FeatureDoc, Scenario, TermRole, ThenItem};
use crate::ident::{common_prefix_len, GuardExpr, Ident, Literal};
use crate::model::{transition_scope, JoinKind, ProcessModel, SplitKind, TransitionDecl};
use crate::pattern::{or_join_partner, reachable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("IllegalGiven: {0}")]
    IllegalGiven(String),
    #[error("NondeterminismConflict: transitions {} compete for `{state}`", .transitions.iter().join(", "))]
    NondeterminismConflict { state: Ident, transitions: Vec<Ident> },
    #[error("NotReplayable: {0}")]
    NotReplayable(String),
}

/// Active leaf paths with token counts, plus the or-join inputs still
/// awaited after an or-split fired.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord, Serialize)]
pub struct Configuration {
    pub active: BTreeMap<Ident, u32>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub pending: BTreeMap<Ident, BTreeSet<usize>>,
}

impl Configuration {
    pub fn initial(model: &ProcessModel) -> Self {
        let mut c = Configuration::default();
        c.active.insert(model.initial_name.clone(), 1);
        c
    }

    /// Builds a configuration from state terms; composites expand to their
    /// default leaf.
    pub fn from_states(model: &ProcessModel, states: &[Ident]) -> Result<Self, ReplayError> {
        if states.is_empty() {
            return Err(ReplayError::IllegalGiven("no state in GIVEN".into()));
        }
        let mut c = Configuration::default();
        for s in states {
            model
                .resolve(s)
                .map_err(|e| ReplayError::IllegalGiven(e.to_string()))?;
            *c.active.entry(model.default_leaf(s)).or_insert(0) += 1;
        }
        if !c.is_legal() {
            let names = c.active.keys().join(", ");
            return Err(ReplayError::IllegalGiven(format!("{names} cannot be active together")));
        }
        Ok(c)
    }

    /// Distinct active leaves never share an enclosing composite.
    pub fn is_legal(&self) -> bool {
        self.active.values().all(|&n| n > 0)
            && self
                .active
                .keys()
                .tuple_combinations()
                .all(|(a, b)| common_prefix_len(a, b) == 0)
    }

    pub fn is_active(&self, path: &Ident) -> bool {
        self.leaf_under(path).is_some()
    }

    pub fn leaf_under(&self, path: &Ident) -> Option<&Ident> {
        self.active.keys().find(|k| path.is_ancestor_or_self(k))
    }

    pub fn count(&self, leaf: &Ident) -> u32 {
        self.active.get(leaf).copied().unwrap_or(0)
    }

    /// Leaves repeated by multiplicity, in path order.
    pub fn leaves(&self) -> Vec<Ident> {
        self.active
            .iter()
            .flat_map(|(k, &n)| std::iter::repeat_n(k.clone(), n as usize))
            .collect()
    }

    fn remove_one(&mut self, leaf: &Ident) {
        if let Some(n) = self.active.get_mut(leaf) {
            *n -= 1;
            if *n == 0 {
                self.active.remove(leaf);
            }
        }
    }
}

pub fn initial_configuration(model: &ProcessModel) -> Configuration {
    Configuration::initial(model)
}

/// Which branches of a transition take part in one firing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiringMode {
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
}

fn nonempty_subsets(items: &[usize]) -> Vec<Vec<usize>> {
    (1..=items.len())
        .flat_map(|k| items.iter().copied().combinations(k))
        .collect()
}

/// Every way the transition can fire: input subsets by join kind times
/// output subsets by split kind, inputs varying slowest.
pub fn firing_modes(t: &TransitionDecl) -> Vec<FiringMode> {
    let all_in: Vec<usize> = (0..t.inputs.len()).collect();
    let input_sets: Vec<Vec<usize>> = match t.join {
        JoinKind::None | JoinKind::And => vec![all_in],
        JoinKind::Or => nonempty_subsets(&all_in),
        JoinKind::Xor | JoinKind::Multi => all_in.iter().map(|&i| vec![i]).collect(),
    };
    let output_sets: Vec<Vec<usize>> = if t.split == SplitKind::Or {
        let guarded: Vec<usize> = (0..t.outputs.len()).filter(|&o| t.outputs[o].guard.is_some()).collect();
        nonempty_subsets(&guarded)
            .into_iter()
            .map(|chosen| {
                (0..t.outputs.len())
                    .filter(|o| t.outputs[*o].guard.is_none() || chosen.contains(o))
                    .collect()
            })
            .collect()
    } else {
        vec![(0..t.outputs.len()).collect()]
    };
    input_sets
        .iter()
        .cartesian_product(&output_sets)
        .map(|(i, o)| FiringMode { inputs: i.clone(), outputs: o.clone() })
        .collect()
}

/// Guard literals that make exactly `outputs` fire: the shared guard, the
/// guards of included outputs, then one falsifying literal per excluded
/// guarded output. `None` when no valuation achieves that.
pub fn mode_literals(t: &TransitionDecl, outputs: &[usize]) -> Option<Vec<Literal>> {
    let mut lits: Vec<Literal> = Vec::new();
    let assign = |lits: &mut Vec<Literal>, l: &Literal| -> bool {
        match lits.iter().find(|x| x.atom == l.atom) {
            Some(x) => x.negated == l.negated,
            None => {
                lits.push(l.clone());
                true
            }
        }
    };
    let included = t
        .shared_guard
        .iter()
        .chain(outputs.iter().filter_map(|&o| t.outputs[o].guard.as_ref()));
    for g in included {
        for l in &g.literals {
            if !assign(&mut lits, l) {
                return None;
            }
        }
    }
    for (o, out) in t.outputs.iter().enumerate() {
        let Some(g) = &out.guard else { continue };
        if outputs.contains(&o) {
            continue;
        }
        let already_false = g
            .literals
            .iter()
            .any(|l| lits.iter().any(|x| x.atom == l.atom && x.negated != l.negated));
        if already_false {
            continue;
        }
        let free = g.literals.iter().find(|l| lits.iter().all(|x| x.atom != l.atom))?;
        lits.push(Literal { atom: free.atom.clone(), negated: !free.negated });
    }
    Some(lits)
}

/// Events and true atoms that trigger `mode` of `t`.
pub fn mode_stimulus(t: &TransitionDecl, mode: &FiringMode) -> Option<(Vec<Ident>, Vec<Literal>)> {
    let lits = mode_literals(t, &mode.outputs)?;
    let mut events: Vec<Ident> = mode
        .inputs
        .iter()
        .filter_map(|&i| t.inputs[i].event.clone())
        .collect();
    events.extend(t.shared_event.iter().cloned());
    let events = events.into_iter().unique().collect();
    Some((events, lits))
}

fn holds(g: &Option<GuardExpr>, val: &BTreeSet<Ident>) -> bool {
    g.as_ref().is_none_or(|g| g.holds(|a| val.contains(a)))
}

fn input_ready(cfg: &Configuration, t: &TransitionDecl, i: usize, events: &BTreeSet<Ident>) -> bool {
    let b = &t.inputs[i];
    cfg.is_active(&b.source) && b.event.as_ref().is_none_or(|e| events.contains(e))
}

fn select_outputs(t: &TransitionDecl, val: &BTreeSet<Ident>) -> Option<Vec<usize>> {
    if !holds(&t.shared_guard, val) {
        return None;
    }
    let idx = 0..t.outputs.len();
    if t.split == SplitKind::Or {
        let chosen: Vec<usize> = idx.filter(|&o| holds(&t.outputs[o].guard, val)).collect();
        let any_guarded = chosen.iter().any(|&o| t.outputs[o].guard.is_some());
        any_guarded.then_some(chosen)
    } else if t.outputs.iter().all(|o| holds(&o.guard, val)) {
        Some(idx.collect())
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Firing {
    transition: usize,
    mode: FiringMode,
}

fn enabled_firings(
    model: &ProcessModel,
    cfg: &Configuration,
    events: &BTreeSet<Ident>,
    val: &BTreeSet<Ident>,
) -> Vec<Firing> {
    let mut out = Vec::new();
    for (ti, t) in model.transitions.iter().enumerate() {
        if t.shared_event.as_ref().is_some_and(|e| !events.contains(e)) {
            continue;
        }
        let Some(outputs) = select_outputs(t, val) else { continue };
        let ready: Vec<usize> = (0..t.inputs.len()).filter(|&i| input_ready(cfg, t, i, events)).collect();
        let input_sets: Vec<Vec<usize>> = match t.join {
            JoinKind::None | JoinKind::And => {
                if ready.len() == t.inputs.len() {
                    vec![ready]
                } else {
                    vec![]
                }
            }
            JoinKind::Xor => ready.first().map(|&i| vec![vec![i]]).unwrap_or_default(),
            JoinKind::Multi => ready.iter().map(|&i| vec![i]).collect(),
            JoinKind::Or => match cfg.pending.get(&t.id) {
                Some(wanted) => {
                    if wanted.iter().all(|i| ready.contains(i)) {
                        vec![wanted.iter().copied().collect()]
                    } else {
                        vec![]
                    }
                }
                None => {
                    let active: Vec<usize> =
                        (0..t.inputs.len()).filter(|&i| cfg.is_active(&t.inputs[i].source)).collect();
                    if !ready.is_empty() && active == ready {
                        vec![ready]
                    } else {
                        vec![]
                    }
                }
            },
        };
        for inputs in input_sets {
            out.push(Firing { transition: ti, mode: FiringMode { inputs, outputs: outputs.clone() } });
        }
    }
    out
}

/// Identifiers of transitions enabled under the stimulus, in declaration
/// order (a multi-join appears once).
pub fn enabled(
    model: &ProcessModel,
    cfg: &Configuration,
    events: &BTreeSet<Ident>,
    valuation: &BTreeSet<Ident>,
) -> Vec<Ident> {
    enabled_firings(model, cfg, events, valuation)
        .into_iter()
        .map(|f| model.transitions[f.transition].id.clone())
        .dedup()
        .collect()
}

/// What one firing does: consumed leaves, action trace, entered leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Effect {
    pub consumed: Vec<Ident>,
    pub trace: Vec<Ident>,
    pub entered: Vec<Ident>,
}

/// Effect of firing `mode` of `t` from `cfg`. Sources not active in `cfg`
/// are taken to be at their default leaf.
pub fn effect(model: &ProcessModel, cfg: &Configuration, t: &TransitionDecl, mode: &FiringMode) -> Effect {
    let mut trace = Vec::new();
    let mut consumed = Vec::new();
    let targets: Vec<&Ident> = mode.outputs.iter().map(|&o| &t.outputs[o].target).collect();
    let sources: Vec<&Ident> = mode.inputs.iter().map(|&i| &t.inputs[i].source).collect();
    for s in &sources {
        let leaf = cfg.leaf_under(s).cloned().unwrap_or_else(|| model.default_leaf(s));
        let scope = targets.iter().map(|tg| transition_scope(s, tg)).min().unwrap_or(0);
        for d in (scope + 1..=leaf.depth()).rev() {
            trace.extend(model.exit_actions(&leaf.prefix(d)).iter().cloned());
        }
        consumed.push(leaf);
    }
    for &i in &mode.inputs {
        trace.extend(t.inputs[i].actions.iter().cloned());
    }
    trace.extend(t.shared_actions.iter().cloned());
    for &o in &mode.outputs {
        trace.extend(t.outputs[o].actions.iter().cloned());
    }
    let mut entered = Vec::new();
    for tg in &targets {
        let scope = sources.iter().map(|s| transition_scope(s, tg)).min().unwrap_or(0);
        let leaf = model.default_leaf(tg);
        for d in scope + 1..=leaf.depth() {
            trace.extend(model.entry_actions(&leaf.prefix(d)).iter().cloned());
        }
        entered.push(leaf);
    }
    Effect { consumed, trace, entered }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepResult {
    pub fired: Vec<Ident>,
    pub trace: Vec<Ident>,
    pub after: Configuration,
    /// Leaves entered by the step, in entry order.
    pub entered: Vec<Ident>,
}

/// Fires every enabled transition once (a multi-join once per ready
/// input). Competing demands on one token are an error.
pub fn step(
    model: &ProcessModel,
    cfg: &Configuration,
    events: &BTreeSet<Ident>,
    valuation: &BTreeSet<Ident>,
) -> Result<StepResult, ReplayError> {
    let firings = enabled_firings(model, cfg, events, valuation);
    let mut demand: BTreeMap<Ident, (u32, Vec<Ident>)> = BTreeMap::new();
    for f in &firings {
        let t = &model.transitions[f.transition];
        for &i in &f.mode.inputs {
            let leaf = cfg.leaf_under(&t.inputs[i].source).expect("ready input is active").clone();
            let e = demand.entry(leaf).or_default();
            e.0 += 1;
            if !e.1.contains(&t.id) {
                e.1.push(t.id.clone());
            }
        }
    }
    for (leaf, (n, ids)) in &demand {
        if *n > cfg.count(leaf) {
            return Err(ReplayError::NondeterminismConflict { state: leaf.clone(), transitions: ids.clone() });
        }
    }
    let mut after = cfg.clone();
    let mut res = StepResult { fired: Vec::new(), trace: Vec::new(), after: Configuration::default(), entered: Vec::new() };
    for f in &firings {
        let t = &model.transitions[f.transition];
        let eff = effect(model, cfg, t, &f.mode);
        for leaf in &eff.consumed {
            after.remove_one(leaf);
        }
        for leaf in &eff.entered {
            *after.active.entry(leaf.clone()).or_insert(0) += 1;
        }
        if t.join == JoinKind::Or {
            after.pending.remove(&t.id);
        }
        if t.split == SplitKind::Or {
            let fired_targets: Vec<Ident> = f.mode.outputs.iter().map(|&o| t.outputs[o].target.clone()).collect();
            let reach = reachable(model, &fired_targets);
            for j in &model.transitions {
                if j.join == JoinKind::Or && or_join_partner(model, j).is_some_and(|p| p.id == t.id) {
                    let wanted: BTreeSet<usize> =
                        (0..j.inputs.len()).filter(|&i| reach.contains(&j.inputs[i].source)).collect();
                    if !wanted.is_empty() {
                        after.pending.insert(j.id.clone(), wanted);
                    }
                }
            }
        }
        res.fired.push(t.id.clone());
        res.trace.extend(eff.trace);
        res.entered.extend(eff.entered);
    }
    res.after = after;
    Ok(res)
}

/// The stimulus a scenario describes, read against the model's namespaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stimulus {
    pub config: Configuration,
    pub events: BTreeSet<Ident>,
    /// Atoms asserted true; every other atom is false.
    pub valuation: BTreeSet<Ident>,
}

pub fn scenario_stimulus(model: &ProcessModel, sc: &Scenario) -> Result<Stimulus, ReplayError> {
    if sc.is_prose() {
        return Err(ReplayError::NotReplayable(format!("`{}` is a prose scenario", sc.name)));
    }
    let guards = model.guards();
    let is_guard = |atom: &Ident, negated: bool, role: TermRole| negated || role == TermRole::Guard || guards.contains(atom);
    let mut states = Vec::new();
    let mut events = BTreeSet::new();
    let mut valuation = BTreeSet::new();
    for t in &sc.given {
        if is_guard(&t.atom, t.negated, t.role) {
            if !t.negated {
                valuation.insert(t.atom.clone());
            }
        } else {
            states.push(t.atom.clone());
        }
    }
    for t in &sc.when {
        if is_guard(&t.atom, t.negated, t.role) {
            if !t.negated {
                valuation.insert(t.atom.clone());
            }
        } else {
            events.insert(t.atom.clone());
        }
    }
    Ok(Stimulus { config: Configuration::from_states(model, &states)?, events, valuation })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub expected: Option<String>,
    pub observed: Option<String>,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub passed: bool,
    pub mismatches: Vec<Mismatch>,
    pub fired: Vec<Ident>,
}

fn is_subsequence(needle: &[Ident], hay: &[Ident]) -> bool {
    let mut it = hay.iter();
    needle.iter().all(|n| it.any(|h| h == n))
}

/// Whether `trace` is the concatenation of `groups` in some order.
fn concatenation_of(groups: &[&Vec<Ident>], trace: &[Ident]) -> bool {
    if groups.is_empty() {
        return trace.is_empty();
    }
    (0..groups.len()).any(|k| {
        let g = groups[k];
        trace.starts_with(g) && {
            let rest: Vec<&Vec<Ident>> = groups.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, g)| *g).collect();
            concatenation_of(&rest, &trace[g.len()..])
        }
    })
}

fn positional(expected: &[Ident], observed: &[Ident], offset: usize, out: &mut Vec<Mismatch>) {
    for p in 0..expected.len().max(observed.len()) {
        let e = expected.get(p);
        let o = observed.get(p);
        if e != o {
            out.push(Mismatch {
                expected: e.map(ToString::to_string),
                observed: o.map(ToString::to_string),
                position: offset + p,
            });
        }
    }
}

/// Reads a lone THEN atom naming a model state, and no model action, as
/// that state.
fn resolve_then(model: &ProcessModel, sc: &Scenario) -> Scenario {
    let states = model.state_names();
    let actions = model.actions();
    let mut out = sc.clone();
    for item in &mut out.then {
        if let ThenItem::ActionSeq(v) = item {
            if let [x] = v.as_slice() {
                if states.contains(x) && !actions.contains(x) {
                    *item = ThenItem::StateTerm(x.clone());
                }
            }
        }
    }
    out
}

/// Runs one step from the scenario's GIVEN under its WHEN and compares the
/// outcome with THEN.
pub fn replay_scenario(model: &ProcessModel, sc: &Scenario, mode: Mode) -> Result<Verdict, ReplayError> {
    let resolved = resolve_then(model, sc);
    let sc = &resolved;
    let st = scenario_stimulus(model, sc)?;
    let res = step(model, &st.config, &st.events, &st.valuation)?;
    let mut mismatches = Vec::new();
    if res.fired.is_empty() {
        mismatches.push(Mismatch { expected: Some("a transition to fire".into()), observed: None, position: 0 });
    }
    let groups: Vec<&Vec<Ident>> = sc
        .then
        .iter()
        .filter_map(|i| match i {
            ThenItem::ActionSeq(v) => Some(v),
            ThenItem::StateTerm(_) => None,
        })
        .collect();
    let expected_actions = sc.then_actions();
    let expected_states: Vec<Ident> = sc.then_states().cloned().collect();
    match mode {
        Mode::Strict => {
            if !concatenation_of(&groups, &res.trace) {
                positional(&expected_actions, &res.trace, 0, &mut mismatches);
            }
            let mut exp: Vec<Ident> = expected_states.iter().map(|s| model.default_leaf(s)).collect();
            let mut obs = res.after.leaves();
            exp.sort();
            obs.sort();
            if exp != obs {
                positional(&exp, &obs, expected_actions.len(), &mut mismatches);
            }
        }
        Mode::PaperExact => {
            let mut remaining = res.trace.clone();
            for (p, a) in expected_actions.iter().enumerate() {
                match remaining.iter().position(|x| x == a) {
                    Some(k) => {
                        remaining.remove(k);
                    }
                    None => mismatches.push(Mismatch { expected: Some(a.to_string()), observed: None, position: p }),
                }
            }
            for g in &groups {
                if !is_subsequence(g, &res.trace) {
                    let at = expected_actions.iter().position(|a| Some(a) == g.first()).unwrap_or(0);
                    mismatches.push(Mismatch {
                        expected: Some(g.iter().join("; ")),
                        observed: Some(res.trace.iter().join("; ")),
                        position: at,
                    });
                }
            }
            for (p, s) in expected_states.iter().enumerate() {
                if !res.after.is_active(s) {
                    mismatches.push(Mismatch {
                        expected: Some(s.to_string()),
                        observed: None,
                        position: expected_actions.len() + p,
                    });
                }
            }
        }
    }
    Ok(Verdict { passed: mismatches.is_empty(), mismatches, fired: res.fired })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScenarioVerdict {
    pub scenario: String,
    pub passed: bool,
    pub mismatches: Vec<Mismatch>,
    pub fired: Vec<Ident>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub passed: bool,
    pub verdicts: Vec<ScenarioVerdict>,
    pub coverage: f64,
    pub uncovered: Vec<Ident>,
}

/// Replays every scenario and measures transition coverage by passing
/// scenarios. A model without transitions counts as fully covered.
pub fn check_suite(model: &ProcessModel, doc: &FeatureDoc, mode: Mode) -> SuiteReport {
    let mut verdicts = Vec::new();
    let mut covered: BTreeSet<Ident> = BTreeSet::new();
    for sc in &doc.scenarios {
        let v = match replay_scenario(model, sc, mode) {
            Ok(v) => {
                if v.passed {
                    covered.extend(v.fired.iter().cloned());
                }
                ScenarioVerdict { scenario: sc.name.clone(), passed: v.passed, mismatches: v.mismatches, fired: v.fired, error: None }
            }
            Err(e) => ScenarioVerdict {
                scenario: sc.name.clone(),
                passed: false,
                mismatches: Vec::new(),
                fired: Vec::new(),
                error: Some(e.to_string()),
            },
        };
        verdicts.push(v);
    }
    let uncovered: Vec<Ident> = model
        .transitions
        .iter()
        .map(|t| t.id.clone())
        .filter(|id| !covered.contains(id))
        .collect();
    let n = model.transitions.len();
    let coverage = if n == 0 { 1.0 } else { (n - uncovered.len()) as f64 / n as f64 };
    SuiteReport { passed: verdicts.iter().all(|v| v.passed), verdicts, coverage, uncovered }
}

pub const MAX_EXPLORE_DEPTH: usize = 32;

/// Maximal step sequences of length at most `depth` from the initial
/// configuration. Each step is driven by the stimulus of one firing mode
/// of one transition; steps that lead to the same outcome are merged.
/// Depths above [`MAX_EXPLORE_DEPTH`] are clamped.
pub fn explore(model: &ProcessModel, depth: usize) -> Vec<Vec<StepResult>> {
    let depth = depth.min(MAX_EXPLORE_DEPTH);
    let mut out = Vec::new();
    let mut path = Vec::new();
    walk(model, &Configuration::initial(model), depth, &mut path, &mut out);
    out
}

fn successors(model: &ProcessModel, cfg: &Configuration) -> Vec<StepResult> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for t in &model.transitions {
        for mode in firing_modes(t) {
            let Some((events, lits)) = mode_stimulus(t, &mode) else { continue };
            let events: BTreeSet<Ident> = events.into_iter().collect();
            let val: BTreeSet<Ident> = lits.into_iter().filter(|l| !l.negated).map(|l| l.atom).collect();
            let Ok(res) = step(model, cfg, &events, &val) else { continue };
            if res.fired.contains(&t.id) && seen.insert((res.fired.clone(), res.trace.clone(), res.after.clone())) {
                out.push(res);
            }
        }
    }
    out
}

fn walk(model: &ProcessModel, cfg: &Configuration, depth: usize, path: &mut Vec<StepResult>, out: &mut Vec<Vec<StepResult>>) {
    let next = if depth == 0 { Vec::new() } else { successors(model, cfg) };
    if next.is_empty() {
        if !path.is_empty() {
            out.push(path.clone());
        }
        return;
    }
    for s in next {
        let after = s.after.clone();
        path.push(s);
        walk(model, &after, depth - 1, path, out);
        path.pop();
    }
}
