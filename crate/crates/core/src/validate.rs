//! Structural validation of process models, and the diagnostic type shared
//! by validation, lint and inference.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::ident::Ident;
use crate::model::{JoinKind, ProcessModel, SplitKind, StateNode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// Closed set of diagnostic codes. The string forms are stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiagCode {
    // validation
    DuplicateStateName,
    DuplicateTransitionId,
    UnresolvedEndpoint,
    MissingInitialChild,
    UnknownInitialChild,
    InitialChildOnSimpleState,
    EmptyInputs,
    EmptyOutputs,
    JoinRequired,
    SplitRequired,
    JoinArity,
    SplitArity,
    OrSplitWithoutGuard,
    AndSplitGuarded,
    MandatoryOutsideOrSplit,
    UnguardedChoiceBranch,
    EmptyGuard,
    DuplicateGuardAtom,
    NamespaceOverlap,
    MissingTrigger,
    InitialAsTarget,
    TargetEnclosesSource,
    DuplicateBranchEndpoint,
    IncompatibleBranches,
    // lint
    OverlappingGuards,
    UnreachableState,
    OrJoinWithoutOrSplit,
    DanglingFinal,
    // inference
    AmbiguousTerm,
    AmbiguousJoin,
    InconsistentTrace,
    TooManyEvents,
    ProseScenario,
    InvalidInferredModel,
}

impl DiagCode {
    pub fn as_str(self) -> &'static str {
        use DiagCode::*;
        match self {
            DuplicateStateName => "DuplicateStateName",
            DuplicateTransitionId => "DuplicateTransitionId",
            UnresolvedEndpoint => "UnresolvedEndpoint",
            MissingInitialChild => "MissingInitialChild",
            UnknownInitialChild => "UnknownInitialChild",
            InitialChildOnSimpleState => "InitialChildOnSimpleState",
            EmptyInputs => "EmptyInputs",
            EmptyOutputs => "EmptyOutputs",
            JoinRequired => "JoinRequired",
            SplitRequired => "SplitRequired",
            JoinArity => "JoinArity",
            SplitArity => "SplitArity",
            OrSplitWithoutGuard => "OrSplitWithoutGuard",
            AndSplitGuarded => "AndSplitGuarded",
            MandatoryOutsideOrSplit => "MandatoryOutsideOrSplit",
            UnguardedChoiceBranch => "UnguardedChoiceBranch",
            EmptyGuard => "EmptyGuard",
            DuplicateGuardAtom => "DuplicateGuardAtom",
            NamespaceOverlap => "NamespaceOverlap",
            MissingTrigger => "MissingTrigger",
            InitialAsTarget => "InitialAsTarget",
            TargetEnclosesSource => "TargetEnclosesSource",
            DuplicateBranchEndpoint => "DuplicateBranchEndpoint",
            IncompatibleBranches => "IncompatibleBranches",
            OverlappingGuards => "OverlappingGuards",
            UnreachableState => "UnreachableState",
            OrJoinWithoutOrSplit => "OrJoinWithoutOrSplit",
            DanglingFinal => "DanglingFinal",
            AmbiguousTerm => "AmbiguousTerm",
            AmbiguousJoin => "AmbiguousJoin",
            InconsistentTrace => "InconsistentTrace",
            TooManyEvents => "TooManyEvents",
            ProseScenario => "ProseScenario",
            InvalidInferredModel => "InvalidInferredModel",
        }
    }
}

impl fmt::Display for DiagCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for DiagCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub code: DiagCode,
    pub severity: Severity,
    /// State path, transition id, or scenario name the diagnostic is about.
    pub location: String,
    pub message: String,
}

impl Diagnostic {
    pub fn error(code: DiagCode, location: impl fmt::Display, message: impl Into<String>) -> Self {
        Diagnostic {
            code,
            severity: Severity::Error,
            location: location.to_string(),
            message: message.into(),
        }
    }

    pub fn warning(code: DiagCode, location: impl fmt::Display, message: impl Into<String>) -> Self {
        Diagnostic {
            code,
            severity: Severity::Warning,
            location: location.to_string(),
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}[{}] {}: {}", self.code, self.location, self.message)
    }
}

pub type ValidationReport = Vec<Diagnostic>;

/// Checks every structural invariant and reports all violations in a
/// stable order.
pub fn validate(model: &ProcessModel) -> ValidationReport {
    let mut out = Vec::new();
    check_states(model, &mut out);
    check_transitions(model, &mut out);
    check_namespaces(model, &mut out);
    out
}

fn check_states(model: &ProcessModel, out: &mut Vec<Diagnostic>) {
    fn walk(prefix: Option<&Ident>, nodes: &[StateNode], out: &mut Vec<Diagnostic>) {
        let mut seen = BTreeSet::new();
        for n in nodes {
            let path = match prefix {
                Some(p) => p.child(n.name.as_str()),
                None => n.name.clone(),
            };
            if n.name.as_str().contains('.') {
                out.push(Diagnostic::error(
                    DiagCode::UnresolvedEndpoint,
                    &path,
                    "local state names may not contain dots",
                ));
            }
            if !seen.insert(n.name.clone()) {
                out.push(Diagnostic::error(
                    DiagCode::DuplicateStateName,
                    &path,
                    format!("state `{path}` is declared more than once"),
                ));
            }
            match (&n.initial_child, n.is_composite()) {
                (None, true) => out.push(Diagnostic::error(
                    DiagCode::MissingInitialChild,
                    &path,
                    "composite state has no initial child",
                )),
                (Some(c), true) if !n.children.iter().any(|ch| ch.name == *c) => {
                    out.push(Diagnostic::error(
                        DiagCode::UnknownInitialChild,
                        &path,
                        format!("initial child `{c}` is not a child of `{path}`"),
                    ))
                }
                (Some(_), false) => out.push(Diagnostic::error(
                    DiagCode::InitialChildOnSimpleState,
                    &path,
                    "simple state declares an initial child",
                )),
                _ => {}
            }
            walk(Some(&path), &n.children, out);
        }
    }
    walk(None, &model.states, out);
    for (path, _) in model.state_paths() {
        if model.is_pseudo(&path) {
            out.push(Diagnostic::error(
                DiagCode::DuplicateStateName,
                &path,
                format!("state `{path}` collides with a pseudostate name"),
            ));
        }
    }
    if model.initial_name == model.final_name {
        out.push(Diagnostic::error(
            DiagCode::DuplicateStateName,
            &model.initial_name,
            "initial and final pseudostates share a name",
        ));
    }
}

fn check_transitions(model: &ProcessModel, out: &mut Vec<Diagnostic>) {
    let mut ids = BTreeSet::new();
    for t in &model.transitions {
        let loc = &t.id;
        if !ids.insert(t.id.clone()) {
            out.push(Diagnostic::error(
                DiagCode::DuplicateTransitionId,
                loc,
                format!("transition id `{loc}` is used more than once"),
            ));
        }
        if t.inputs.is_empty() {
            out.push(Diagnostic::error(DiagCode::EmptyInputs, loc, "transition has no input branch"));
        }
        if t.outputs.is_empty() {
            out.push(Diagnostic::error(DiagCode::EmptyOutputs, loc, "transition has no output branch"));
        }
        for src in t.sources() {
            if model.resolve(src).is_err() {
                out.push(Diagnostic::error(
                    DiagCode::UnresolvedEndpoint,
                    loc,
                    format!("source `{src}` is not a declared state"),
                ));
            }
        }
        for tgt in t.targets() {
            if *tgt == model.initial_name {
                out.push(Diagnostic::error(
                    DiagCode::InitialAsTarget,
                    loc,
                    "the initial pseudostate cannot be a target",
                ));
            } else if model.resolve(tgt).is_err() {
                out.push(Diagnostic::error(
                    DiagCode::UnresolvedEndpoint,
                    loc,
                    format!("target `{tgt}` is not a declared state"),
                ));
            }
            for src in t.sources() {
                if tgt.is_ancestor_of(src) {
                    out.push(Diagnostic::error(
                        DiagCode::TargetEnclosesSource,
                        loc,
                        format!("target `{tgt}` encloses source `{src}`"),
                    ));
                }
            }
        }
        if t.inputs.len() > 1 && t.join == JoinKind::None {
            out.push(Diagnostic::error(DiagCode::JoinRequired, loc, "several inputs need a join kind"));
        }
        if t.inputs.len() < 2 && t.join != JoinKind::None {
            out.push(Diagnostic::error(DiagCode::JoinArity, loc, "a join needs at least two inputs"));
        }
        if t.outputs.len() > 1 && t.split == SplitKind::None {
            out.push(Diagnostic::error(DiagCode::SplitRequired, loc, "several outputs need a split kind"));
        }
        if t.outputs.len() < 2 && t.split != SplitKind::None {
            out.push(Diagnostic::error(DiagCode::SplitArity, loc, "a split needs at least two outputs"));
        }
        match t.split {
            SplitKind::Or => {
                if !t.outputs.iter().any(|o| o.guard.is_some()) {
                    out.push(Diagnostic::error(
                        DiagCode::OrSplitWithoutGuard,
                        loc,
                        "an or-split needs at least one guarded output",
                    ));
                }
                for o in &t.outputs {
                    if o.guard.is_none() && !o.mandatory {
                        out.push(Diagnostic::error(
                            DiagCode::UnguardedChoiceBranch,
                            loc,
                            format!("unguarded or-split output to `{}` must be marked mandatory", o.target),
                        ));
                    }
                    if o.guard.is_some() && o.mandatory {
                        out.push(Diagnostic::error(
                            DiagCode::UnguardedChoiceBranch,
                            loc,
                            format!("mandatory output to `{}` cannot carry a guard", o.target),
                        ));
                    }
                }
            }
            SplitKind::And => {
                if t.outputs.iter().any(|o| o.guard.is_some()) {
                    out.push(Diagnostic::error(
                        DiagCode::AndSplitGuarded,
                        loc,
                        "and-split outputs cannot be guarded",
                    ));
                }
            }
            SplitKind::None => {}
        }
        if t.split != SplitKind::Or && t.outputs.iter().any(|o| o.mandatory) {
            out.push(Diagnostic::error(
                DiagCode::MandatoryOutsideOrSplit,
                loc,
                "only or-split outputs can be mandatory",
            ));
        }
        let guards = t.shared_guard.iter().chain(t.outputs.iter().filter_map(|o| o.guard.as_ref()));
        for g in guards {
            if g.literals.is_empty() {
                out.push(Diagnostic::error(DiagCode::EmptyGuard, loc, "guard has no literals"));
            }
            let mut atoms = BTreeSet::new();
            for a in g.atoms() {
                if !atoms.insert(a) {
                    out.push(Diagnostic::error(
                        DiagCode::DuplicateGuardAtom,
                        loc,
                        format!("guard mentions `{a}` twice"),
                    ));
                }
            }
        }
        // every firing needs an event or a guard to be stated in WHEN
        let has_shared_trigger = t.shared_event.is_some() || t.shared_guard.is_some();
        let all_outputs_guarded = t.outputs.iter().all(|o| o.guard.is_some());
        let trigger_for_each_input = match t.join {
            JoinKind::None | JoinKind::And => t.inputs.iter().any(|b| b.event.is_some()),
            _ => t.inputs.iter().all(|b| b.event.is_some()),
        };
        if !has_shared_trigger
            && !trigger_for_each_input
            && !(all_outputs_guarded || t.split == SplitKind::Or)
        {
            out.push(Diagnostic::error(
                DiagCode::MissingTrigger,
                loc,
                "transition has neither an event nor a guard",
            ));
        }
        check_distinct(t.sources(), loc, "source", out);
        check_distinct(t.targets(), loc, "target", out);
        check_orthogonal(model, t.sources().collect(), loc, "sources", out);
        if t.split != SplitKind::None {
            check_orthogonal(model, t.targets().collect(), loc, "targets", out);
        }
    }
}

fn check_distinct<'a>(
    paths: impl Iterator<Item = &'a Ident>,
    loc: &Ident,
    what: &str,
    out: &mut Vec<Diagnostic>,
) {
    let mut seen = BTreeSet::new();
    for p in paths {
        if !seen.insert(p) {
            out.push(Diagnostic::error(
                DiagCode::DuplicateBranchEndpoint,
                loc,
                format!("{what} `{p}` appears in more than one branch"),
            ));
        }
    }
}

/// Branch endpoints that would have to be active together must not sit in
/// different children of one composite state.
fn check_orthogonal(
    model: &ProcessModel,
    paths: Vec<&Ident>,
    loc: &Ident,
    what: &str,
    out: &mut Vec<Diagnostic>,
) {
    for (i, a) in paths.iter().enumerate() {
        for b in &paths[i + 1..] {
            if a == b || model.is_pseudo(a) || model.is_pseudo(b) {
                continue;
            }
            let common = crate::ident::common_prefix_len(a, b);
            if common > 0 || a.is_ancestor_or_self(b) || b.is_ancestor_or_self(a) {
                out.push(Diagnostic::error(
                    DiagCode::IncompatibleBranches,
                    loc,
                    format!("{what} `{a}` and `{b}` cannot be active together"),
                ));
            }
        }
    }
}

fn check_namespaces(model: &ProcessModel, out: &mut Vec<Diagnostic>) {
    let mut owner: BTreeMap<Ident, &'static str> = BTreeMap::new();
    let spaces: [(&'static str, BTreeSet<Ident>); 4] = [
        ("state", model.state_names()),
        ("event", model.events()),
        ("guard", model.guards()),
        ("action", model.actions()),
    ];
    for (space, names) in &spaces {
        for n in names {
            if let Some(prev) = owner.get(n) {
                out.push(Diagnostic::error(
                    DiagCode::NamespaceOverlap,
                    n,
                    format!("`{n}` is used both as {prev} and as {space}"),
                ));
            } else {
                owner.insert(n.clone(), space);
            }
        }
    }
}
