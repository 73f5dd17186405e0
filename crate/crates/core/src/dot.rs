//! Graphviz rendering.

use std::fmt::Write as _;

use crate::ident::Ident;
use crate::model::{ProcessModel, StateNode, TransitionDecl};

fn q(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn list(v: &[Ident]) -> String {
    v.iter().map(Ident::as_str).collect::<Vec<_>>().join(", ")
}

fn state_label(path: &Ident, node: &StateNode) -> String {
    let mut label = path.to_string();
    if !node.entry_actions.is_empty() {
        let _ = write!(label, "\\nentry / {}", list(&node.entry_actions));
    }
    if !node.exit_actions.is_empty() {
        let _ = write!(label, "\\nexit / {}", list(&node.exit_actions));
    }
    label
}

fn write_states(out: &mut String, nodes: &[StateNode], prefix: Option<&Ident>, depth: usize) {
    let pad = "  ".repeat(depth);
    for n in nodes {
        let path = match prefix {
            Some(p) => p.child(n.name.as_str()),
            None => n.name.clone(),
        };
        // labels are built with escaped newlines, so only quotes need care
        let label = format!("\"{}\"", state_label(&path, n).replace('"', "\\\""));
        if n.is_composite() {
            let _ = writeln!(out, "{pad}subgraph {} {{", q(&format!("cluster_{path}")));
            let _ = writeln!(out, "{pad}  label={label};");
            let _ = writeln!(out, "{pad}  {} [shape=plaintext, label={}];", q(path.as_str()), q(path.as_str()));
            write_states(out, &n.children, Some(&path), depth + 1);
            let _ = writeln!(out, "{pad}}}");
        } else {
            let _ = writeln!(out, "{pad}{} [shape=box, style=rounded, label={label}];", q(path.as_str()));
        }
    }
}

/// Edge label: `event [guard] / actions`, with empty parts omitted.
fn edge_label(t: &TransitionDecl, input: usize, output: usize) -> String {
    let b = &t.inputs[input];
    let o = &t.outputs[output];
    let events: Vec<&str> = b.event.iter().chain(t.shared_event.iter()).map(Ident::as_str).collect();
    let guards: Vec<String> = t
        .shared_guard
        .iter()
        .chain(o.guard.iter())
        .map(|g| g.to_string())
        .collect();
    let actions: Vec<Ident> = b
        .actions
        .iter()
        .chain(&t.shared_actions)
        .chain(&o.actions)
        .cloned()
        .collect();
    let mut parts = Vec::new();
    if !events.is_empty() {
        parts.push(events.join(" "));
    }
    if !guards.is_empty() {
        parts.push(format!("[{}]", guards.join(" and ")));
    }
    if !actions.is_empty() {
        parts.push(format!("/ {}", list(&actions)));
    }
    parts.join(" ")
}

/// Renders the model as a `digraph process`. Composite states become
/// clusters holding an anchor node with the composite's own path; every
/// (input branch, output branch) pair of a transition becomes one edge.
pub fn render_dot(model: &ProcessModel) -> String {
    let mut out = String::from("digraph process {\n");
    let _ = writeln!(out, "  label={};", q(&model.title));
    out.push_str("  rankdir=LR;\n");
    let _ = writeln!(
        out,
        "  {} [shape=circle, style=filled, fillcolor=black, width=0.2, label=\"\", xlabel={}];",
        q(model.initial_name.as_str()),
        q(model.initial_name.as_str())
    );
    if model.has_final() {
        let _ = writeln!(
            out,
            "  {} [shape=doublecircle, label={}];",
            q(model.final_name.as_str()),
            q(model.final_name.as_str())
        );
    }
    write_states(&mut out, &model.states, None, 1);
    for t in &model.transitions {
        for (i, b) in t.inputs.iter().enumerate() {
            for (j, o) in t.outputs.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "  {} -> {} [label={}, tooltip={}];",
                    q(b.source.as_str()),
                    q(o.target.as_str()),
                    q(&edge_label(t, i, j)),
                    q(t.id.as_str())
                );
            }
        }
    }
    out.push_str("}\n");
    out
}
