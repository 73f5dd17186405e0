//! XML process format, an SCXML-flavoured subset.
//!
//! ```xml
//! <process title="M9" role="" feature="" benefit="">
//!   <initial id="alpha"/>
//!   <final id="Beta"/>
//!   <state id="S1">
//!     <onentry actions="a2"/>
//!     <onexit actions="a3 a4"/>
//!   </state>
//!   <state id="S6">
//!     <initial id="S6.1"/>
//!     <state id="S6.1"/>
//!   </state>
//!   <trans id="t2" split="and">
//!     <in source="S1" event="ev2"/>
//!     <out target="S2" actions="a5"/>
//!     <out target="S3" actions="a6"/>
//!   </trans>
//! </process>
//! ```
//!
//! `trans` also takes `join`, `event`, `cond` and `actions` attributes for
//! the shared parts; `out` takes `cond` and `mandatory="true"`. Guard
//! conditions use the DSL syntax (`g1 and not g2`), action lists are
//! whitespace separated, nested state ids are fully qualified.

use std::fmt::Write as _;

use roxmltree::{Document, Node};

use crate::ident::{GuardExpr, Ident, Literal};
use crate::model::{
    InBranch, JoinKind, OutBranch, ProcessModel, SplitKind, StateNode, TransitionDecl,
};
use crate::validate::validate;
use crate::ModelError;

type XResult<T> = Result<T, ModelError>;

fn xerr(node: Node<'_, '_>, msg: impl std::fmt::Display) -> ModelError {
    let pos = node.document().text_pos_at(node.range().start);
    ModelError::Xml(format!("{}:{}: {msg}", pos.row, pos.col))
}

fn required<'a>(node: Node<'a, '_>, attr: &str) -> XResult<&'a str> {
    node.attribute(attr)
        .ok_or_else(|| xerr(node, format!("<{}> is missing required attribute `{attr}`", node.tag_name().name())))
}

fn ident_attr(node: Node<'_, '_>, value: &str) -> XResult<Ident> {
    Ident::new(value).map_err(|e| xerr(node, e))
}

fn ident_list(node: Node<'_, '_>, attr: &str) -> XResult<Vec<Ident>> {
    node.attribute(attr)
        .unwrap_or("")
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| ident_attr(node, s))
        .collect()
}

fn guard_attr(node: Node<'_, '_>) -> XResult<Option<GuardExpr>> {
    let Some(text) = node.attribute("cond") else {
        return Ok(None);
    };
    let mut lits = Vec::new();
    let mut words = text.split_whitespace().peekable();
    loop {
        let mut negated = false;
        let mut w = words.next().ok_or_else(|| xerr(node, "empty guard condition"))?;
        if w == "not" {
            negated = true;
            w = words.next().ok_or_else(|| xerr(node, "`not` without atom"))?;
        }
        lits.push(Literal { atom: ident_attr(node, w)?, negated });
        match words.next() {
            None => break,
            Some("and") => continue,
            Some(other) => return Err(xerr(node, format!("unexpected `{other}` in condition"))),
        }
    }
    Ok(Some(GuardExpr::new(lits)))
}

fn elements<'a, 'i>(node: Node<'a, 'i>) -> impl Iterator<Item = Node<'a, 'i>> {
    node.children().filter(|n| n.is_element())
}

fn parse_state(node: Node<'_, '_>, parent: Option<&Ident>) -> XResult<StateNode> {
    let path = ident_attr(node, required(node, "id")?)?;
    let placed = match parent {
        None => path.depth() == 1,
        Some(p) => path.parent().as_ref() == Some(p),
    };
    if !placed {
        return Err(xerr(node, format!("state id `{path}` does not match its nesting")));
    }
    let mut s = StateNode::simple(Ident::new(path.local()).expect("segment"));
    for child in elements(node) {
        match child.tag_name().name() {
            "onentry" => s.entry_actions.extend(ident_list(child, "actions")?),
            "onexit" => s.exit_actions.extend(ident_list(child, "actions")?),
            "initial" => {
                let c = ident_attr(child, required(child, "id")?)?;
                let local = if c.parent().as_ref() == Some(&path) {
                    Ident::new(c.local()).expect("segment")
                } else {
                    c
                };
                s.initial_child = Some(local);
            }
            "state" => s.children.push(parse_state(child, Some(&path))?),
            other => return Err(xerr(child, format!("unexpected element <{other}> in <state>"))),
        }
    }
    Ok(s)
}

fn parse_trans(node: Node<'_, '_>) -> XResult<TransitionDecl> {
    let id = ident_attr(node, required(node, "id")?)?;
    let join = match node.attribute("join") {
        None => JoinKind::None,
        Some(k) => JoinKind::from_keyword(k).ok_or_else(|| xerr(node, format!("unknown join kind `{k}`")))?,
    };
    let split = match node.attribute("split") {
        None => SplitKind::None,
        Some(k) => SplitKind::from_keyword(k).ok_or_else(|| xerr(node, format!("unknown split kind `{k}`")))?,
    };
    let mut t = TransitionDecl {
        id,
        inputs: Vec::new(),
        split,
        join,
        shared_event: node.attribute("event").map(|e| ident_attr(node, e)).transpose()?,
        shared_guard: guard_attr(node)?,
        shared_actions: ident_list(node, "actions")?,
        outputs: Vec::new(),
    };
    for child in elements(node) {
        match child.tag_name().name() {
            "in" => t.inputs.push(InBranch {
                source: ident_attr(child, required(child, "source")?)?,
                event: child.attribute("event").map(|e| ident_attr(child, e)).transpose()?,
                actions: ident_list(child, "actions")?,
            }),
            "out" => t.outputs.push(OutBranch {
                target: ident_attr(child, required(child, "target")?)?,
                guard: guard_attr(child)?,
                actions: ident_list(child, "actions")?,
                mandatory: match child.attribute("mandatory") {
                    None | Some("false") => false,
                    Some("true") => true,
                    Some(v) => return Err(xerr(child, format!("mandatory must be true or false, got `{v}`"))),
                },
            }),
            other => return Err(xerr(child, format!("unexpected element <{other}> in <trans>"))),
        }
    }
    Ok(t)
}

pub fn parse_xml(text: &str) -> Result<ProcessModel, ModelError> {
    let doc = Document::parse(text).map_err(|e| ModelError::Xml(e.to_string()))?;
    let root = doc.root_element();
    if root.tag_name().name() != "process" {
        return Err(xerr(root, "root element must be <process>"));
    }
    let mut m = ProcessModel::new(root.attribute("title").unwrap_or(""));
    m.role = root.attribute("role").unwrap_or("").to_string();
    m.feature = root.attribute("feature").unwrap_or("").to_string();
    m.benefit = root.attribute("benefit").unwrap_or("").to_string();
    for child in elements(root) {
        match child.tag_name().name() {
            "initial" => m.initial_name = ident_attr(child, required(child, "id")?)?,
            "final" => m.final_name = ident_attr(child, required(child, "id")?)?,
            "state" => m.states.push(parse_state(child, None)?),
            "trans" => m.transitions.push(parse_trans(child)?),
            other => return Err(xerr(child, format!("unexpected element <{other}> in <process>"))),
        }
    }
    let report = validate(&m);
    if report.is_empty() {
        Ok(m)
    } else {
        Err(ModelError::Semantic(report))
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn words(v: &[Ident]) -> String {
    v.iter().map(Ident::as_str).collect::<Vec<_>>().join(" ")
}

fn write_state(out: &mut String, node: &StateNode, path: &Ident, depth: usize) {
    let pad = "  ".repeat(depth);
    let empty = node.entry_actions.is_empty()
        && node.exit_actions.is_empty()
        && node.children.is_empty()
        && node.initial_child.is_none();
    if empty {
        let _ = writeln!(out, "{pad}<state id=\"{path}\"/>");
        return;
    }
    let _ = writeln!(out, "{pad}<state id=\"{path}\">");
    if !node.entry_actions.is_empty() {
        let _ = writeln!(out, "{pad}  <onentry actions=\"{}\"/>", words(&node.entry_actions));
    }
    if !node.exit_actions.is_empty() {
        let _ = writeln!(out, "{pad}  <onexit actions=\"{}\"/>", words(&node.exit_actions));
    }
    if let Some(c) = &node.initial_child {
        let _ = writeln!(out, "{pad}  <initial id=\"{}\"/>", path.child(c.as_str()));
    }
    for c in &node.children {
        write_state(out, c, &path.child(c.name.as_str()), depth + 1);
    }
    let _ = writeln!(out, "{pad}</state>");
}

/// Renders a model in the XML format accepted by [`parse_xml`].
pub fn serialize_xml(model: &ProcessModel) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<process title=\"{}\" role=\"{}\" feature=\"{}\" benefit=\"{}\">",
        esc(&model.title),
        esc(&model.role),
        esc(&model.feature),
        esc(&model.benefit)
    );
    let _ = writeln!(out, "  <initial id=\"{}\"/>", model.initial_name);
    let _ = writeln!(out, "  <final id=\"{}\"/>", model.final_name);
    for s in &model.states {
        write_state(&mut out, s, &s.name, 1);
    }
    for t in &model.transitions {
        let mut attrs = format!("id=\"{}\"", t.id);
        if t.join != JoinKind::None {
            let _ = write!(attrs, " join=\"{}\"", t.join.keyword());
        }
        if t.split != SplitKind::None {
            let _ = write!(attrs, " split=\"{}\"", t.split.keyword());
        }
        if let Some(e) = &t.shared_event {
            let _ = write!(attrs, " event=\"{e}\"");
        }
        if let Some(g) = &t.shared_guard {
            let _ = write!(attrs, " cond=\"{g}\"");
        }
        if !t.shared_actions.is_empty() {
            let _ = write!(attrs, " actions=\"{}\"", words(&t.shared_actions));
        }
        let _ = writeln!(out, "  <trans {attrs}>");
        for b in &t.inputs {
            let mut a = format!("source=\"{}\"", b.source);
            if let Some(e) = &b.event {
                let _ = write!(a, " event=\"{e}\"");
            }
            if !b.actions.is_empty() {
                let _ = write!(a, " actions=\"{}\"", words(&b.actions));
            }
            let _ = writeln!(out, "    <in {a}/>");
        }
        for o in &t.outputs {
            let mut a = format!("target=\"{}\"", o.target);
            if let Some(g) = &o.guard {
                let _ = write!(a, " cond=\"{g}\"");
            }
            if !o.actions.is_empty() {
                let _ = write!(a, " actions=\"{}\"", words(&o.actions));
            }
            if o.mandatory {
                a.push_str(" mandatory=\"true\"");
            }
            let _ = writeln!(out, "    <out {a}/>");
        }
        out.push_str("  </trans>\n");
    }
    out.push_str("</process>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_target_is_xml_error() {
        let text = r#"<process title="x"><state id="S1"/>
            <trans id="t"><in source="S1" event="e"/><out/></trans></process>"#;
        match parse_xml(text) {
            Err(ModelError::Xml(msg)) => assert!(msg.contains("target"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_xml_is_xml_error() {
        assert!(matches!(parse_xml("<process"), Err(ModelError::Xml(_))));
    }

    #[test]
    fn guard_conditions_parse() {
        let text = r#"<process title="x"><state id="S1"/><state id="S2"/>
            <trans id="t" cond="g1 and not g2"><in source="S1"/><out target="S2"/></trans></process>"#;
        let m = parse_xml(text).unwrap();
        assert_eq!(m.transitions[0].shared_guard.as_ref().unwrap().to_string(), "g1 and not g2");
        assert_eq!(parse_xml(&serialize_xml(&m)).unwrap(), m);
    }
}
