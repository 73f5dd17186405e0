//! Identifiers and guard expressions.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Error returned when a token is not a legal identifier.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid identifier `{0}`")]
pub struct InvalidIdent(pub String);

/// A case-sensitive name made of letters, digits and underscores.
///
/// Dots separate hierarchy levels (`S6.1` is child `1` of `S6`), so a dot
/// may never lead, trail, or repeat.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ident(String);

impl Ident {
    pub fn new(text: impl Into<String>) -> Result<Self, InvalidIdent> {
        let text = text.into();
        if is_valid(&text) {
            Ok(Ident(text))
        } else {
            Err(InvalidIdent(text))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Hierarchy segments, outermost first.
    pub fn segments(&self) -> impl Iterator<Item = &str> {
        self.0.split('.')
    }

    pub fn depth(&self) -> usize {
        self.0.split('.').count()
    }

    /// The enclosing path, if this path is nested.
    pub fn parent(&self) -> Option<Ident> {
        self.0.rfind('.').map(|i| Ident(self.0[..i].to_string()))
    }

    /// The last segment.
    pub fn local(&self) -> &str {
        self.0.rsplit('.').next().unwrap_or(&self.0)
    }

    pub fn child(&self, local: &str) -> Ident {
        Ident(format!("{}.{}", self.0, local))
    }

    /// True when `self` is a strict ancestor of `other`.
    pub fn is_ancestor_of(&self, other: &Ident) -> bool {
        other.0.len() > self.0.len()
            && other.0.starts_with(&self.0)
            && other.0.as_bytes()[self.0.len()] == b'.'
    }

    pub fn is_ancestor_or_self(&self, other: &Ident) -> bool {
        self == other || self.is_ancestor_of(other)
    }

    /// Prefix of the first `n` segments.
    pub fn prefix(&self, n: usize) -> Ident {
        Ident(self.0.split('.').take(n).collect::<Vec<_>>().join("."))
    }
}

fn is_valid(text: &str) -> bool {
    !text.is_empty()
        && text.split('.').all(|seg| {
            !seg.is_empty() && seg.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        })
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Ident {
    type Err = InvalidIdent;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ident::new(s)
    }
}

impl serde::Serialize for Ident {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl AsRef<str> for Ident {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Shorthand used heavily by fixtures and tests. Panics on bad input.
pub fn id(text: &str) -> Ident {
    Ident::new(text).unwrap_or_else(|e| panic!("{e}"))
}

/// Number of leading segments two paths share.
pub fn common_prefix_len(a: &Ident, b: &Ident) -> usize {
    a.segments()
        .zip(b.segments())
        .take_while(|(x, y)| x == y)
        .count()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: Ident,
    pub negated: bool,
}

impl Literal {
    pub fn pos(atom: Ident) -> Self {
        Literal { atom, negated: false }
    }

    pub fn neg(atom: Ident) -> Self {
        Literal { atom, negated: true }
    }

    pub fn holds(&self, value: bool) -> bool {
        value != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "not {}", self.atom)
        } else {
            write!(f, "{}", self.atom)
        }
    }
}

/// A conjunction of possibly negated guard atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GuardExpr {
    pub literals: Vec<Literal>,
}

impl GuardExpr {
    pub fn new(literals: Vec<Literal>) -> Self {
        GuardExpr { literals }
    }

    pub fn atom(name: Ident) -> Self {
        GuardExpr { literals: vec![Literal::pos(name)] }
    }

    /// Evaluates under `valuation`; atoms it does not mention are false.
    pub fn holds<F: Fn(&Ident) -> bool>(&self, valuation: F) -> bool {
        self.literals.iter().all(|l| l.holds(valuation(&l.atom)))
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Ident> {
        self.literals.iter().map(|l| &l.atom)
    }

    /// Two conjunctions can be true together unless one contains the
    /// complement of a literal in the other (or itself).
    pub fn compatible_with(&self, other: &GuardExpr) -> bool {
        let all: Vec<&Literal> = self.literals.iter().chain(&other.literals).collect();
        !all.iter()
            .any(|a| all.iter().any(|b| a.atom == b.atom && a.negated != b.negated))
    }
}

impl fmt::Display for GuardExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, lit) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" and ")?;
            }
            write!(f, "{lit}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_identifiers() {
        for bad in ["", ".a", "a.", "a..b", "a b", "a-b", "é"] {
            assert!(Ident::new(bad).is_err(), "{bad:?} accepted");
        }
        for good in ["S1", "S6.1", "_after_x", "alpha", "Beta", "a13"] {
            assert!(Ident::new(good).is_ok(), "{good:?} rejected");
        }
    }

    #[test]
    fn hierarchy_helpers() {
        let p = id("S6.1");
        assert_eq!(p.parent(), Some(id("S6")));
        assert_eq!(p.local(), "1");
        assert!(id("S6").is_ancestor_of(&p));
        assert!(!id("S").is_ancestor_of(&p));
        assert!(!p.is_ancestor_of(&p));
        assert_eq!(common_prefix_len(&id("S6.1"), &id("S6.2")), 1);
        assert_eq!(id("A.B.C").prefix(2), id("A.B"));
    }

    #[test]
    fn guard_compatibility() {
        let g1 = GuardExpr::atom(id("g1"));
        let not_g1 = GuardExpr::new(vec![Literal::neg(id("g1"))]);
        let g2 = GuardExpr::atom(id("g2"));
        assert!(g1.compatible_with(&g2));
        assert!(!g1.compatible_with(&not_g1));
    }
}
