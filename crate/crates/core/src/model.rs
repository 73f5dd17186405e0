//! The statechart intermediate representation.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::ident::{GuardExpr, Ident};

pub const DEFAULT_INITIAL: &str = "alpha";
pub const DEFAULT_FINAL: &str = "Beta";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateNode {
    /// Local name; the qualified path is built from the parent chain.
    pub name: Ident,
    pub entry_actions: Vec<Ident>,
    pub exit_actions: Vec<Ident>,
    pub children: Vec<StateNode>,
    /// Local name of the child entered by default.
    pub initial_child: Option<Ident>,
}

impl StateNode {
    pub fn simple(name: Ident) -> Self {
        StateNode {
            name,
            entry_actions: Vec::new(),
            exit_actions: Vec::new(),
            children: Vec::new(),
            initial_child: None,
        }
    }

    pub fn is_composite(&self) -> bool {
        !self.children.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SplitKind {
    None,
    And,
    Or,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum JoinKind {
    None,
    And,
    Xor,
    Or,
    Multi,
}

impl SplitKind {
    pub fn keyword(self) -> &'static str {
        match self {
            SplitKind::None => "none",
            SplitKind::And => "and",
            SplitKind::Or => "or",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "none" => Some(SplitKind::None),
            "and" => Some(SplitKind::And),
            "or" => Some(SplitKind::Or),
            _ => None,
        }
    }
}

impl JoinKind {
    pub fn keyword(self) -> &'static str {
        match self {
            JoinKind::None => "none",
            JoinKind::And => "and",
            JoinKind::Xor => "xor",
            JoinKind::Or => "or",
            JoinKind::Multi => "multi",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "none" => Some(JoinKind::None),
            "and" => Some(JoinKind::And),
            "xor" => Some(JoinKind::Xor),
            "or" => Some(JoinKind::Or),
            "multi" => Some(JoinKind::Multi),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InBranch {
    pub source: Ident,
    pub event: Option<Ident>,
    pub actions: Vec<Ident>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutBranch {
    pub target: Ident,
    pub guard: Option<GuardExpr>,
    pub actions: Vec<Ident>,
    pub mandatory: bool,
}

impl InBranch {
    pub fn new(source: Ident) -> Self {
        InBranch { source, event: None, actions: Vec::new() }
    }
}

impl OutBranch {
    pub fn new(target: Ident) -> Self {
        OutBranch { target, guard: None, actions: Vec::new(), mandatory: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionDecl {
    pub id: Ident,
    pub inputs: Vec<InBranch>,
    pub split: SplitKind,
    pub join: JoinKind,
    pub shared_event: Option<Ident>,
    pub shared_guard: Option<GuardExpr>,
    pub shared_actions: Vec<Ident>,
    pub outputs: Vec<OutBranch>,
}

impl TransitionDecl {
    /// A one-in/one-out transition with no annotations.
    pub fn simple(id: Ident, source: Ident, target: Ident) -> Self {
        TransitionDecl {
            id,
            inputs: vec![InBranch::new(source)],
            split: SplitKind::None,
            join: JoinKind::None,
            shared_event: None,
            shared_guard: None,
            shared_actions: Vec::new(),
            outputs: vec![OutBranch::new(target)],
        }
    }

    pub fn sources(&self) -> impl Iterator<Item = &Ident> {
        self.inputs.iter().map(|b| &b.source)
    }

    pub fn targets(&self) -> impl Iterator<Item = &Ident> {
        self.outputs.iter().map(|b| &b.target)
    }

    /// Whether any guard (shared or on an output) is attached.
    pub fn is_guarded(&self) -> bool {
        self.shared_guard.is_some() || self.outputs.iter().any(|o| o.guard.is_some())
    }

    pub fn events(&self) -> impl Iterator<Item = &Ident> {
        self.inputs
            .iter()
            .filter_map(|b| b.event.as_ref())
            .chain(self.shared_event.iter())
    }

    pub fn guard_atoms(&self) -> impl Iterator<Item = &Ident> {
        self.shared_guard
            .iter()
            .chain(self.outputs.iter().filter_map(|o| o.guard.as_ref()))
            .flat_map(|g| g.atoms())
    }

    pub fn actions(&self) -> impl Iterator<Item = &Ident> {
        self.inputs
            .iter()
            .flat_map(|b| b.actions.iter())
            .chain(self.shared_actions.iter())
            .chain(self.outputs.iter().flat_map(|o| o.actions.iter()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternKind {
    Sequence,
    ParallelSplit,
    Synchronization,
    ExclusiveChoice,
    SimpleMerge,
    MultipleChoice,
    SynchronizeMerge,
    MultipleMerge,
    EntryExitCase,
    EmbeddedStates,
}

impl PatternKind {
    pub const ALL: [PatternKind; 10] = [
        PatternKind::Sequence,
        PatternKind::ParallelSplit,
        PatternKind::Synchronization,
        PatternKind::ExclusiveChoice,
        PatternKind::SimpleMerge,
        PatternKind::MultipleChoice,
        PatternKind::SynchronizeMerge,
        PatternKind::MultipleMerge,
        PatternKind::EntryExitCase,
        PatternKind::EmbeddedStates,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PatternKind::Sequence => "Sequence",
            PatternKind::ParallelSplit => "ParallelSplit",
            PatternKind::Synchronization => "Synchronization",
            PatternKind::ExclusiveChoice => "ExclusiveChoice",
            PatternKind::SimpleMerge => "SimpleMerge",
            PatternKind::MultipleChoice => "MultipleChoice",
            PatternKind::SynchronizeMerge => "SynchronizeMerge",
            PatternKind::MultipleMerge => "MultipleMerge",
            PatternKind::EntryExitCase => "EntryExitCase",
            PatternKind::EmbeddedStates => "EmbeddedStates",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        PatternKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl serde::Serialize for PatternKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessModel {
    pub title: String,
    pub role: String,
    pub feature: String,
    pub benefit: String,
    pub initial_name: Ident,
    pub final_name: Ident,
    pub states: Vec<StateNode>,
    pub transitions: Vec<TransitionDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown state `{0}`")]
pub struct UnknownState(pub String);

/// What a path names inside a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolved<'a> {
    Initial,
    Final,
    State(&'a StateNode),
}

impl ProcessModel {
    pub fn new(title: impl Into<String>) -> Self {
        ProcessModel {
            title: title.into(),
            role: String::new(),
            feature: String::new(),
            benefit: String::new(),
            initial_name: Ident::new(DEFAULT_INITIAL).unwrap(),
            final_name: Ident::new(DEFAULT_FINAL).unwrap(),
            states: Vec::new(),
            transitions: Vec::new(),
        }
    }

    pub fn resolve(&self, path: &Ident) -> Result<Resolved<'_>, UnknownState> {
        if *path == self.initial_name {
            return Ok(Resolved::Initial);
        }
        if *path == self.final_name {
            return Ok(Resolved::Final);
        }
        self.state(path)
            .map(Resolved::State)
            .ok_or_else(|| UnknownState(path.to_string()))
    }

    /// Looks up a declared (non-pseudo) state by qualified path.
    pub fn state(&self, path: &Ident) -> Option<&StateNode> {
        let mut segs = path.segments();
        let first = segs.next()?;
        let mut node = self.states.iter().find(|s| s.name.as_str() == first)?;
        for seg in segs {
            node = node.children.iter().find(|c| c.name.as_str() == seg)?;
        }
        Some(node)
    }

    pub fn state_mut(&mut self, path: &Ident) -> Option<&mut StateNode> {
        let mut segs = path.segments();
        let first = segs.next()?;
        let mut node = self.states.iter_mut().find(|s| s.name.as_str() == first)?;
        for seg in segs {
            node = node.children.iter_mut().find(|c| c.name.as_str() == seg)?;
        }
        Some(node)
    }

    pub fn is_pseudo(&self, path: &Ident) -> bool {
        *path == self.initial_name || *path == self.final_name
    }

    /// Whether a final pseudostate is part of the model (some transition
    /// touches it).
    pub fn has_final(&self) -> bool {
        self.transitions.iter().any(|t| {
            t.targets().chain(t.sources()).any(|p| *p == self.final_name)
        })
    }

    /// Every declared state with its qualified path, depth-first in
    /// declaration order.
    pub fn state_paths(&self) -> Vec<(Ident, &StateNode)> {
        fn walk<'a>(prefix: Option<&Ident>, nodes: &'a [StateNode], out: &mut Vec<(Ident, &'a StateNode)>) {
            for n in nodes {
                let path = match prefix {
                    Some(p) => p.child(n.name.as_str()),
                    None => n.name.clone(),
                };
                out.push((path.clone(), n));
                walk(Some(&path), &n.children, out);
            }
        }
        let mut out = Vec::new();
        walk(None, &self.states, &mut out);
        out
    }

    /// Pseudostates present in the model: initial always, final if used.
    pub fn pseudostates(&self) -> Vec<Ident> {
        let mut v = vec![self.initial_name.clone()];
        if self.has_final() {
            v.push(self.final_name.clone());
        }
        v
    }

    /// Descends through initial children until a leaf is reached.
    pub fn default_leaf(&self, path: &Ident) -> Ident {
        let mut cur = path.clone();
        while let Some(node) = self.state(&cur) {
            match (&node.initial_child, node.is_composite()) {
                (Some(child), true) => cur = cur.child(child.as_str()),
                _ => break,
            }
        }
        cur
    }

    /// The chain of paths entered when descending from `path` to its
    /// default leaf, excluding `path` itself.
    pub fn default_descent(&self, path: &Ident) -> Vec<Ident> {
        let leaf = self.default_leaf(path);
        (path.depth() + 1..=leaf.depth()).map(|n| leaf.prefix(n)).collect()
    }

    pub fn is_leaf(&self, path: &Ident) -> bool {
        self.state(path).is_none_or(|n| !n.is_composite())
    }

    pub fn entry_actions(&self, path: &Ident) -> &[Ident] {
        self.state(path).map(|n| n.entry_actions.as_slice()).unwrap_or(&[])
    }

    pub fn exit_actions(&self, path: &Ident) -> &[Ident] {
        self.state(path).map(|n| n.exit_actions.as_slice()).unwrap_or(&[])
    }

    pub fn transition(&self, id: &Ident) -> Option<&TransitionDecl> {
        self.transitions.iter().find(|t| t.id == *id)
    }

    pub fn events(&self) -> BTreeSet<Ident> {
        self.transitions.iter().flat_map(|t| t.events().cloned()).collect()
    }

    pub fn guards(&self) -> BTreeSet<Ident> {
        self.transitions.iter().flat_map(|t| t.guard_atoms().cloned()).collect()
    }

    pub fn actions(&self) -> BTreeSet<Ident> {
        let mut set: BTreeSet<Ident> =
            self.transitions.iter().flat_map(|t| t.actions().cloned()).collect();
        for (_, n) in self.state_paths() {
            set.extend(n.entry_actions.iter().cloned());
            set.extend(n.exit_actions.iter().cloned());
        }
        set
    }

    /// All state-namespace names: declared paths plus pseudostates.
    pub fn state_names(&self) -> BTreeSet<Ident> {
        let mut set: BTreeSet<Ident> = self.state_paths().into_iter().map(|(p, _)| p).collect();
        set.insert(self.initial_name.clone());
        set.insert(self.final_name.clone());
        set
    }
}

/// Number of leading segments shared by `source` and `target`, capped so
/// that both endpoints themselves are always exited and entered.
pub fn transition_scope(source: &Ident, target: &Ident) -> usize {
    let common = crate::ident::common_prefix_len(source, target);
    common.min(source.depth().min(target.depth()) - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ident::id;

    fn nested() -> ProcessModel {
        let mut m = ProcessModel::new("t");
        let mut s6 = StateNode::simple(id("S6"));
        s6.children = vec![StateNode::simple(id("1")), StateNode::simple(id("2"))];
        s6.initial_child = Some(id("1"));
        m.states = vec![StateNode::simple(id("S5")), s6];
        m
    }

    #[test]
    fn resolve_paths_and_pseudostates() {
        let m = nested();
        assert_eq!(m.resolve(&id("alpha")), Ok(Resolved::Initial));
        assert_eq!(m.resolve(&id("Beta")), Ok(Resolved::Final));
        match m.resolve(&id("S6.1")) {
            Ok(Resolved::State(n)) => assert_eq!(n.name.as_str(), "1"),
            other => panic!("{other:?}"),
        }
        assert_eq!(m.resolve(&id("S6.9")), Err(UnknownState("S6.9".into())));
    }

    #[test]
    fn resolve_is_left_inverse_of_qualified_paths() {
        let m = nested();
        for (path, node) in m.state_paths() {
            match m.resolve(&path) {
                Ok(Resolved::State(n)) => assert!(std::ptr::eq(n, node)),
                other => panic!("{path}: {other:?}"),
            }
        }
    }

    #[test]
    fn default_descent_reaches_leaf() {
        let m = nested();
        assert_eq!(m.default_leaf(&id("S6")), id("S6.1"));
        assert_eq!(m.default_descent(&id("S6")), vec![id("S6.1")]);
        assert_eq!(m.default_leaf(&id("S5")), id("S5"));
    }

    #[test]
    fn scope_is_capped() {
        assert_eq!(transition_scope(&id("S6.1"), &id("S6.2")), 1);
        assert_eq!(transition_scope(&id("S6.3"), &id("Beta")), 0);
        assert_eq!(transition_scope(&id("S1"), &id("S1")), 0);
        assert_eq!(transition_scope(&id("S6.1"), &id("S6.1")), 1);
    }
}
