//! Bundled fixture models and a seeded generator of random valid models.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dsl::parse_dsl_named;
use crate::ident::{GuardExpr, Ident, Literal};
use crate::model::{InBranch, JoinKind, OutBranch, ProcessModel, SplitKind, StateNode, TransitionDecl};
use crate::validate::validate;

pub struct Fixture {
    pub name: &'static str,
    pub dsl: &'static str,
    pub xml: &'static str,
}

macro_rules! fixture {
    ($name:literal) => {
        Fixture {
            name: $name,
            dsl: include_str!(concat!("../fixtures/", $name, ".pml")),
            xml: include_str!(concat!("../fixtures/", $name, ".xml")),
        }
    };
}

pub const FIXTURES: [Fixture; 9] = [
    fixture!("m1"),
    fixture!("m2"),
    fixture!("m3"),
    fixture!("m4"),
    fixture!("m5"),
    fixture!("m6"),
    fixture!("m7"),
    fixture!("m8"),
    fixture!("m9"),
];

/// Parses a bundled fixture by name (`"m1"` .. `"m9"`).
pub fn fixture(name: &str) -> ProcessModel {
    let f = FIXTURES
        .iter()
        .find(|f| f.name.eq_ignore_ascii_case(name))
        .unwrap_or_else(|| panic!("no fixture {name}"));
    parse_dsl_named(f.dsl, f.name).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

pub fn fixtures() -> Vec<(&'static str, ProcessModel)> {
    FIXTURES.iter().map(|f| (f.name, fixture(f.name))).collect()
}

/// Limits for [`random_model`].
#[derive(Debug, Clone, Copy)]
pub struct GenLimits {
    pub max_states: usize,
    pub max_transitions: usize,
    pub max_or_join_arity: usize,
}

impl Default for GenLimits {
    fn default() -> Self {
        GenLimits { max_states: 12, max_transitions: 10, max_or_join_arity: 4 }
    }
}

struct Names {
    next: [usize; 4],
}

impl Names {
    fn take(&mut self, kind: usize) -> Ident {
        let prefix = ["S", "ev", "g", "a"][kind];
        self.next[kind] += 1;
        Ident::new(format!("{prefix}{}", self.next[kind])).expect("generated name")
    }
    fn event(&mut self) -> Ident {
        self.take(1)
    }
    fn guard(&mut self) -> Ident {
        self.take(2)
    }
    fn action(&mut self) -> Ident {
        self.take(3)
    }
    fn actions(&mut self, rng: &mut ChaCha8Rng, max: usize) -> Vec<Ident> {
        (0..rng.random_range(0..=max)).map(|_| self.action()).collect()
    }
}

fn random_guard(rng: &mut ChaCha8Rng, names: &mut Names) -> GuardExpr {
    let mut lits = vec![Literal::pos(names.guard())];
    if rng.random_bool(0.2) {
        lits.push(Literal::neg(names.guard()));
    }
    GuardExpr::new(lits)
}

/// A valid model drawn from `seed`. States are named `S*`, events `ev*`,
/// guards `g*`, actions `a*`; every name is used once, every input branch
/// carries its own event (guard-only transitions get a positive literal),
/// and no transition both joins and splits.
pub fn random_model(seed: u64, limits: GenLimits) -> ProcessModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let m = attempt(&mut rng, limits);
        if !validate(&m).iter().any(|d| d.is_error()) {
            return m;
        }
    }
}

fn attempt(rng: &mut ChaCha8Rng, limits: GenLimits) -> ProcessModel {
    let mut names = Names { next: [0; 4] };
    let mut m = ProcessModel::new(format!("random {}", rng.random::<u32>()));
    let total = rng.random_range(2..=limits.max_states.max(2));
    let mut used = 0;
    while used < total {
        let name = names.take(0);
        let mut node = StateNode::simple(name);
        used += 1;
        if total - used >= 2 && rng.random_bool(0.2) {
            let k = rng.random_range(2..=3.min(total - used));
            node.children = (1..=k).map(|i| StateNode::simple(Ident::new(i.to_string()).unwrap())).collect();
            node.initial_child = Some(node.children[rng.random_range(0..k)].name.clone());
            used += k;
        }
        if rng.random_bool(0.2) {
            node.entry_actions = names.actions(rng, 2);
        }
        if rng.random_bool(0.2) {
            node.exit_actions = names.actions(rng, 2);
        }
        m.states.push(node);
    }
    let tops: Vec<Ident> = m.states.iter().map(|s| s.name.clone()).collect();
    let all: Vec<Ident> = m.state_paths().into_iter().map(|(p, _)| p).collect();
    let related = |a: &Ident, b: &Ident| a.is_ancestor_or_self(b) || b.is_ancestor_or_self(a);

    let n_trans = rng.random_range(1..=limits.max_transitions.max(1));
    for k in 0..n_trans {
        let id = Ident::new(format!("t{}", k + 1)).unwrap();
        if k == 0 {
            let mut t = TransitionDecl::simple(id, m.initial_name.clone(), all.choose(rng).unwrap().clone());
            t.inputs[0].event = Some(names.event());
            t.outputs[0].actions = names.actions(rng, 1);
            m.transitions.push(t);
            continue;
        }
        let shape = rng.random_range(0..7);
        let (join, split) = match shape {
            0 | 1 => (JoinKind::None, SplitKind::None),
            2 => (JoinKind::None, SplitKind::And),
            3 => (JoinKind::None, SplitKind::Or),
            4 => (JoinKind::And, SplitKind::None),
            5 => (if rng.random_bool(0.5) { JoinKind::Or } else { JoinKind::Xor }, SplitKind::None),
            _ => (JoinKind::Multi, SplitKind::None),
        };
        let n_in = match join {
            JoinKind::None => 1,
            JoinKind::Or => rng.random_range(2..=limits.max_or_join_arity.max(2)),
            _ => rng.random_range(2..=3),
        };
        let n_out = if split == SplitKind::None { 1 } else { rng.random_range(2..=3) };
        let mut pool = tops.clone();
        pool.shuffle(rng);
        let sources: Vec<Ident> = if n_in == 1 {
            vec![all.choose(rng).unwrap().clone()]
        } else {
            // orthogonal sources: distinct top-level states, maybe a child
            pool.iter().take(n_in).map(|top| descend(rng, &m, top)).collect()
        };
        let mut targets: Vec<Ident> = Vec::new();
        let candidates: Vec<Ident> = if n_out == 1 { all.clone() } else { pool.iter().rev().cloned().collect() };
        for c in candidates {
            if targets.len() == n_out {
                break;
            }
            if sources.iter().any(|s| related(s, &c)) || targets.iter().any(|t| related(t, &c)) {
                continue;
            }
            targets.push(if n_out == 1 { c } else { descend(rng, &m, &c) });
        }
        if targets.is_empty() || sources.len() < n_in {
            continue;
        }
        if n_out == 1 && rng.random_bool(0.1) {
            targets[0] = m.final_name.clone();
        }
        let inputs: Vec<InBranch> = sources
            .into_iter()
            .map(|s| InBranch { source: s, event: Some(names.event()), actions: names.actions(rng, 1) })
            .collect();
        let mut outputs: Vec<OutBranch> = targets.into_iter().map(|tg| {
            let mut o = OutBranch::new(tg);
            o.actions = names.actions(rng, 1);
            o
        }).collect();
        let mut t = TransitionDecl {
            id,
            inputs,
            split: if outputs.len() > 1 { split } else { SplitKind::None },
            join,
            shared_event: None,
            shared_guard: None,
            shared_actions: names.actions(rng, 2),
            outputs: Vec::new(),
        };
        if t.split == SplitKind::Or {
            let mandatory = outputs.len() > 2 && rng.random_bool(0.3);
            for (i, o) in outputs.iter_mut().enumerate() {
                if mandatory && i == 0 {
                    o.mandatory = true;
                } else {
                    o.guard = Some(random_guard(rng, &mut names));
                }
            }
        } else if join == JoinKind::None && rng.random_bool(0.3) {
            outputs[0].guard = Some(random_guard(rng, &mut names));
            if rng.random_bool(0.3) {
                // guard-only trigger
                t.inputs[0].event = None;
            }
        }
        if join != JoinKind::None && rng.random_bool(0.3) {
            t.shared_event = Some(names.event());
        }
        t.outputs = outputs;
        m.transitions.push(t);
    }
    m
}

/// `top` itself or, for a composite, sometimes one of its children.
fn descend(rng: &mut ChaCha8Rng, m: &ProcessModel, top: &Ident) -> Ident {
    match m.state(top) {
        Some(n) if n.is_composite() && rng.random_bool(0.5) => top.child(n.children.choose(rng).unwrap().name.as_str()),
        _ => top.clone(),
    }
}
