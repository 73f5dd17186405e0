//! Bidirectional compiler between statechart process models and
//! Given-When-Then feature files.
//!
//! The pipeline is:
//!
//! * [`dsl`] / [`xml`] parse a [`ProcessModel`]; [`validate`] checks it.
//! * [`pattern::classify`] maps each transition onto a workflow pattern.
//! * [`emit::emit_feature`] produces a [`FeatureDoc`], which
//!   [`feature::format_feature`] renders as text.
//! * [`feature::parse_feature`] and [`infer::infer_model`] go the other way.
//! * [`replay`] executes scenarios against a model and measures coverage.
//! * [`skeleton`] derives step-definition skeletons from scenario text.
//! * [`dot::render_dot`] draws a model as a Graphviz digraph.

pub mod cli;
pub mod corpus;
pub mod dot;
pub mod dsl;
pub mod emit;
pub mod feature;
pub mod ident;
pub mod infer;
pub mod iso;
pub mod model;
pub mod pattern;
pub mod replay;
pub mod skeleton;
pub mod validate;
pub mod xml;

use thiserror::Error;

pub use dot::render_dot;
pub use dsl::{parse_dsl, serialize_dsl, SourceSpan};
pub use emit::{emit_feature, EmitError, Mode};
pub use feature::{format_feature, parse_feature, FeatureDoc, Scenario, Style, Term, ThenItem};
pub use ident::{GuardExpr, Ident, Literal};
pub use infer::{infer_model, InferenceHints};
pub use model::{
    InBranch, JoinKind, OutBranch, PatternKind, ProcessModel, SplitKind, StateNode, TransitionDecl,
};
pub use pattern::{classify, lint, PatternInstance};
pub use replay::{check_suite, replay_scenario, step, Configuration, StepResult, Verdict};
pub use skeleton::{emit_skeletons, extract_skeleton, StepKeyword, StepSkeleton};
pub use validate::{validate, DiagCode, Diagnostic, Severity};
pub use xml::parse_xml;

/// Failure to load a process model.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("{span}: syntax error: {kind}")]
    Syntax { kind: dsl::SyntaxKind, span: SourceSpan },
    #[error("xml error: {0}")]
    Xml(String),
    #[error("model is invalid: {}", render_diagnostics(.0))]
    Semantic(Vec<Diagnostic>),
}

fn render_diagnostics(d: &[Diagnostic]) -> String {
    d.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; ")
}
