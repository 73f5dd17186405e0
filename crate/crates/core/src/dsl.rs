//! The textual process DSL.
//!
//! ```text
//! process "Order handling" {
//!   role "clerk"
//!   state S1 { entry a2  exit a3, a4 }
//!   state S2
//!   trans t1 { from S1 on ev1 do a1 to S2 }
//! }
//! ```
//!
//! Inside a branch, a comma followed by a declared state name starts the
//! next branch; any other comma continues the branch's action list.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use crate::ident::{GuardExpr, Ident, Literal};
use crate::model::{
    InBranch, JoinKind, OutBranch, ProcessModel, SplitKind, StateNode, TransitionDecl,
    DEFAULT_FINAL, DEFAULT_INITIAL,
};
use crate::validate::validate;
use crate::ModelError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceSpan {
    pub file: String,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SyntaxKind {
    MissingProcessHeader,
    UnexpectedChar(char),
    UnterminatedString,
    UnexpectedEof { expected: String },
    UnexpectedToken { expected: String, found: String },
    InvalidIdent(String),
    MisplacedStatePath(String),
}

impl fmt::Display for SyntaxKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SyntaxKind::MissingProcessHeader => f.write_str("MissingProcessHeader: expected `process \"title\" {`"),
            SyntaxKind::UnexpectedChar(c) => write!(f, "UnexpectedChar: `{c}`"),
            SyntaxKind::UnterminatedString => f.write_str("UnterminatedString"),
            SyntaxKind::UnexpectedEof { expected } => write!(f, "UnexpectedEof: expected {expected}"),
            SyntaxKind::UnexpectedToken { expected, found } => {
                write!(f, "UnexpectedToken: expected {expected}, found `{found}`")
            }
            SyntaxKind::InvalidIdent(s) => write!(f, "InvalidIdent: `{s}`"),
            SyntaxKind::MisplacedStatePath(s) => {
                write!(f, "MisplacedStatePath: `{s}` does not match its nesting")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Str(String),
    LBrace,
    RBrace,
    Comma,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => f.write_str(w),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::LBrace => f.write_str("{"),
            Tok::RBrace => f.write_str("}"),
            Tok::Comma => f.write_str(","),
        }
    }
}

struct Lexed {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.'
}

fn lex(text: &str, file: &str) -> Result<Vec<Lexed>, ModelError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    let err = |kind, line, column| ModelError::Syntax {
        kind,
        span: SourceSpan { file: file.to_string(), line, column },
    };
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '{' | '}' | ',' => {
                chars.next();
                col += 1;
                let tok = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    _ => Tok::Comma,
                };
                out.push(Lexed { tok, line: tl, column: tc });
            }
            '"' => {
                chars.next();
                col += 1;
                let mut s = String::new();
                loop {
                    match chars.next() {
                        None | Some('\n') => return Err(err(SyntaxKind::UnterminatedString, tl, tc)),
                        Some('"') => {
                            col += 1;
                            break;
                        }
                        Some('\\') => {
                            col += 1;
                            match chars.next() {
                                Some(e @ ('"' | '\\')) => {
                                    s.push(e);
                                    col += 1;
                                }
                                Some('n') => {
                                    s.push('\n');
                                    col += 1;
                                }
                                _ => return Err(err(SyntaxKind::UnterminatedString, tl, tc)),
                            }
                        }
                        Some(c) => {
                            s.push(c);
                            col += 1;
                        }
                    }
                }
                out.push(Lexed { tok: Tok::Str(s), line: tl, column: tc });
            }
            c if is_word_char(c) => {
                let mut w = String::new();
                while let Some(&c) = chars.peek() {
                    if !is_word_char(c) {
                        break;
                    }
                    w.push(c);
                    chars.next();
                    col += 1;
                }
                out.push(Lexed { tok: Tok::Word(w), line: tl, column: tc });
            }
            other => return Err(err(SyntaxKind::UnexpectedChar(other), tl, tc)),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Lexed>,
    pos: usize,
    file: &'a str,
    eof: (usize, usize),
    known_states: BTreeSet<String>,
}

type PResult<T> = Result<T, ModelError>;

impl Parser<'_> {
    fn span_at(&self, i: usize) -> SourceSpan {
        let (line, column) = self
            .toks
            .get(i)
            .map(|t| (t.line, t.column))
            .unwrap_or(self.eof);
        SourceSpan { file: self.file.to_string(), line, column }
    }

    fn fail<T>(&self, kind: SyntaxKind) -> PResult<T> {
        Err(ModelError::Syntax { kind, span: self.span_at(self.pos) })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, off: usize) -> Option<&Tok> {
        self.toks.get(self.pos + off).map(|t| &t.tok)
    }

    fn peek_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(x)) if x == w)
    }

    fn unexpected<T>(&self, expected: &str) -> PResult<T> {
        match self.peek() {
            None => self.fail(SyntaxKind::UnexpectedEof { expected: expected.to_string() }),
            Some(t) => self.fail(SyntaxKind::UnexpectedToken {
                expected: expected.to_string(),
                found: t.to_string(),
            }),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> PResult<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.unexpected(expected)
        }
    }

    fn expect_word(&mut self, w: &str) -> PResult<()> {
        if self.peek_word(w) {
            self.pos += 1;
            Ok(())
        } else {
            self.unexpected(&format!("`{w}`"))
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.peek_word(w) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                match Ident::new(w.clone()) {
                    Ok(id) => {
                        self.pos += 1;
                        Ok(id)
                    }
                    Err(_) => self.fail(SyntaxKind::InvalidIdent(w)),
                }
            }
            _ => self.unexpected("identifier"),
        }
    }

    fn string(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::Str(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.unexpected("string"),
        }
    }

    fn model(&mut self) -> PResult<ProcessModel> {
        if !self.peek_word("process") {
            return self.fail(SyntaxKind::MissingProcessHeader);
        }
        self.pos += 1;
        let title = self.string()?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut m = ProcessModel::new(title);
        loop {
            let key = match self.peek() {
                Some(Tok::Word(w))
                    if matches!(w.as_str(), "role" | "feature" | "benefit" | "initialname" | "finalname")
                        && matches!(self.peek_at(1), Some(Tok::Str(_))) =>
                {
                    w.clone()
                }
                _ => break,
            };
            self.pos += 1;
            let at = self.pos;
            let value = self.string()?;
            match key.as_str() {
                "role" => m.role = value,
                "feature" => m.feature = value,
                "benefit" => m.benefit = value,
                other => {
                    let ident = Ident::new(value.clone()).map_err(|_| ModelError::Syntax {
                        kind: SyntaxKind::InvalidIdent(value),
                        span: self.span_at(at),
                    })?;
                    if other == "initialname" {
                        m.initial_name = ident;
                    } else {
                        m.final_name = ident;
                    }
                }
            }
        }
        self.known_states.insert(m.initial_name.to_string());
        self.known_states.insert(m.final_name.to_string());
        loop {
            match self.peek() {
                Some(Tok::RBrace) => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::Word(w)) if w == "state" => {
                    let s = self.state(None)?;
                    m.states.push(s);
                }
                Some(Tok::Word(w)) if w == "trans" => {
                    let t = self.trans()?;
                    m.transitions.push(t);
                }
                _ => return self.unexpected("`state`, `trans` or `}`"),
            }
        }
        if self.peek().is_some() {
            return self.unexpected("end of input");
        }
        Ok(m)
    }

    fn state(&mut self, parent: Option<&Ident>) -> PResult<StateNode> {
        self.expect_word("state")?;
        let at = self.pos;
        let path = self.ident()?;
        let placed = match parent {
            None => path.depth() == 1,
            Some(p) => path.parent().as_ref() == Some(p),
        };
        if !placed {
            return Err(ModelError::Syntax {
                kind: SyntaxKind::MisplacedStatePath(path.to_string()),
                span: self.span_at(at),
            });
        }
        let mut node = StateNode::simple(Ident::new(path.local()).expect("segment of an ident"));
        if self.peek() != Some(&Tok::LBrace) {
            return Ok(node);
        }
        self.pos += 1;
        loop {
            match self.peek() {
                Some(Tok::RBrace) => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::Word(w)) => match w.as_str() {
                    "entry" => {
                        self.pos += 1;
                        let list = self.ident_list()?;
                        node.entry_actions.extend(list);
                    }
                    "exit" => {
                        self.pos += 1;
                        let list = self.ident_list()?;
                        node.exit_actions.extend(list);
                    }
                    "initial" => {
                        self.pos += 1;
                        let at = self.pos;
                        let child = self.ident()?;
                        let local = if child.parent().as_ref() == Some(&path) {
                            Ident::new(child.local()).expect("segment")
                        } else if child.depth() == 1 {
                            child
                        } else {
                            return Err(ModelError::Syntax {
                                kind: SyntaxKind::MisplacedStatePath(child.to_string()),
                                span: self.span_at(at),
                            });
                        };
                        node.initial_child = Some(local);
                    }
                    "state" => {
                        let child = self.state(Some(&path))?;
                        node.children.push(child);
                    }
                    _ => return self.unexpected("`entry`, `exit`, `initial`, `state` or `}`"),
                },
                _ => return self.unexpected("`entry`, `exit`, `initial`, `state` or `}`"),
            }
        }
        Ok(node)
    }

    fn ident_list(&mut self) -> PResult<Vec<Ident>> {
        let mut v = vec![self.ident()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            v.push(self.ident()?);
        }
        Ok(v)
    }

    /// Action list inside a branch: stops before a comma that introduces
    /// the next branch.
    fn branch_actions(&mut self) -> PResult<Vec<Ident>> {
        let mut v = vec![self.ident()?];
        while self.peek() == Some(&Tok::Comma) {
            match self.peek_at(1) {
                Some(Tok::Word(w)) if !self.known_states.contains(w) => {
                    self.pos += 1;
                    v.push(self.ident()?);
                }
                _ => break,
            }
        }
        Ok(v)
    }

    fn guard(&mut self) -> PResult<GuardExpr> {
        let mut lits = Vec::new();
        loop {
            let negated = self.eat_word("not");
            let atom = self.ident()?;
            lits.push(Literal { atom, negated });
            if !self.eat_word("and") {
                break;
            }
        }
        Ok(GuardExpr::new(lits))
    }

    fn trans(&mut self) -> PResult<TransitionDecl> {
        self.expect_word("trans")?;
        let id = self.ident()?;
        self.expect(Tok::LBrace, "`{`")?;
        self.expect_word("from")?;
        let mut inputs = Vec::new();
        loop {
            let mut b = InBranch::new(self.ident()?);
            if self.eat_word("on") {
                b.event = Some(self.ident()?);
            }
            if self.eat_word("do") {
                b.actions = self.branch_actions()?;
            }
            inputs.push(b);
            if self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
            } else {
                break;
            }
        }
        let mut t = TransitionDecl {
            id,
            inputs,
            split: SplitKind::None,
            join: JoinKind::None,
            shared_event: None,
            shared_guard: None,
            shared_actions: Vec::new(),
            outputs: Vec::new(),
        };
        if self.eat_word("join") {
            t.join = self.kind(JoinKind::from_keyword, "join kind")?;
        }
        if self.eat_word("split") {
            t.split = self.kind(SplitKind::from_keyword, "split kind")?;
        }
        if self.eat_word("on") {
            t.shared_event = Some(self.ident()?);
        }
        if self.eat_word("if") {
            t.shared_guard = Some(self.guard()?);
        }
        if self.eat_word("do") {
            t.shared_actions = self.ident_list()?;
        }
        self.expect_word("to")?;
        loop {
            let mut o = OutBranch::new(self.ident()?);
            if self.eat_word("if") {
                o.guard = Some(self.guard()?);
            }
            if self.eat_word("do") {
                o.actions = self.branch_actions()?;
            }
            if self.eat_word("mandatory") {
                o.mandatory = true;
            }
            t.outputs.push(o);
            if self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.expect(Tok::RBrace, "`}`")?;
        Ok(t)
    }

    fn kind<K>(&mut self, f: fn(&str) -> Option<K>, what: &str) -> PResult<K> {
        if let Some(Tok::Word(w)) = self.peek() {
            if let Some(k) = f(w) {
                self.pos += 1;
                return Ok(k);
            }
        }
        self.unexpected(what)
    }
}

pub fn parse_dsl(text: &str) -> Result<ProcessModel, ModelError> {
    parse_dsl_named(text, "<input>")
}

/// Parses DSL text, reporting spans against `file`.
pub fn parse_dsl_named(text: &str, file: &str) -> Result<ProcessModel, ModelError> {
    let toks = lex(text, file)?;
    let eof = text
        .lines()
        .enumerate()
        .last()
        .map(|(i, l)| (i + 1, l.chars().count() + 1))
        .unwrap_or((1, 1));
    let known_states = toks
        .windows(2)
        .filter_map(|w| match (&w[0].tok, &w[1].tok) {
            (Tok::Word(k), Tok::Word(name)) if k == "state" => Some(name.clone()),
            _ => None,
        })
        .collect();
    let mut p = Parser { toks, pos: 0, file, eof, known_states };
    let model = p.model()?;
    let report = validate(&model);
    if report.is_empty() {
        Ok(model)
    } else {
        Err(ModelError::Semantic(report))
    }
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn join_idents(v: &[Ident]) -> String {
    v.iter().map(Ident::as_str).collect::<Vec<_>>().join(", ")
}

fn write_state(out: &mut String, node: &StateNode, path: &Ident, indent: usize) {
    let pad = "  ".repeat(indent);
    let plain = node.entry_actions.is_empty()
        && node.exit_actions.is_empty()
        && node.children.is_empty()
        && node.initial_child.is_none();
    if plain {
        let _ = writeln!(out, "{pad}state {path}");
        return;
    }
    let _ = writeln!(out, "{pad}state {path} {{");
    if !node.entry_actions.is_empty() {
        let _ = writeln!(out, "{pad}  entry {}", join_idents(&node.entry_actions));
    }
    if !node.exit_actions.is_empty() {
        let _ = writeln!(out, "{pad}  exit {}", join_idents(&node.exit_actions));
    }
    if let Some(c) = &node.initial_child {
        let _ = writeln!(out, "{pad}  initial {}", path.child(c.as_str()));
    }
    for child in &node.children {
        write_state(out, child, &path.child(child.name.as_str()), indent + 1);
    }
    let _ = writeln!(out, "{pad}}}");
}

fn write_trans(out: &mut String, t: &TransitionDecl) {
    let _ = writeln!(out, "  trans {} {{", t.id);
    let inputs: Vec<String> = t
        .inputs
        .iter()
        .map(|b| {
            let mut s = b.source.to_string();
            if let Some(e) = &b.event {
                let _ = write!(s, " on {e}");
            }
            if !b.actions.is_empty() {
                let _ = write!(s, " do {}", join_idents(&b.actions));
            }
            s
        })
        .collect();
    let _ = writeln!(out, "    from {}", inputs.join(", "));
    let last = t.inputs.last();
    let absorbs_event = t.shared_event.is_some()
        && last.is_some_and(|b| b.event.is_none() && b.actions.is_empty());
    let absorbs_actions = t.shared_event.is_none()
        && t.shared_guard.is_none()
        && !t.shared_actions.is_empty()
        && last.is_some_and(|b| b.actions.is_empty());
    if t.join != JoinKind::None
        || (t.split == SplitKind::None && (absorbs_event || absorbs_actions))
    {
        let _ = writeln!(out, "    join {}", t.join.keyword());
    }
    if t.split != SplitKind::None {
        let _ = writeln!(out, "    split {}", t.split.keyword());
    }
    if let Some(e) = &t.shared_event {
        let _ = writeln!(out, "    on {e}");
    }
    if let Some(g) = &t.shared_guard {
        let _ = writeln!(out, "    if {g}");
    }
    if !t.shared_actions.is_empty() {
        let _ = writeln!(out, "    do {}", join_idents(&t.shared_actions));
    }
    let outputs: Vec<String> = t
        .outputs
        .iter()
        .map(|o| {
            let mut s = o.target.to_string();
            if let Some(g) = &o.guard {
                let _ = write!(s, " if {g}");
            }
            if !o.actions.is_empty() {
                let _ = write!(s, " do {}", join_idents(&o.actions));
            }
            if o.mandatory {
                s.push_str(" mandatory");
            }
            s
        })
        .collect();
    let _ = writeln!(out, "    to {}", outputs.join(", "));
    let _ = writeln!(out, "  }}");
}

/// Renders a model as DSL text in declaration order.
pub fn serialize_dsl(model: &ProcessModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "process {} {{", quote(&model.title));
    for (key, value) in [("role", &model.role), ("feature", &model.feature), ("benefit", &model.benefit)] {
        if !value.is_empty() {
            let _ = writeln!(out, "  {key} {}", quote(value));
        }
    }
    if model.initial_name.as_str() != DEFAULT_INITIAL {
        let _ = writeln!(out, "  initialname {}", quote(model.initial_name.as_str()));
    }
    if model.final_name.as_str() != DEFAULT_FINAL {
        let _ = writeln!(out, "  finalname {}", quote(model.final_name.as_str()));
    }
    for s in &model.states {
        write_state(&mut out, s, &s.name, 1);
    }
    for t in &model.transitions {
        write_trans(&mut out, t);
    }
    out.push_str("}\n");
    out
}
