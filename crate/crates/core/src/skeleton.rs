//! Step-definition skeletons: a pattern with `"(.*)"` captures for quoted
//! text and a function-name slug.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::feature::FeatureDoc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum StepKeyword {
    Given,
    When,
    Then,
}

impl StepKeyword {
    /// Case-insensitive; `And`/`But` are not keywords on their own.
    pub fn parse(word: &str) -> Option<Self> {
        match word.to_ascii_lowercase().as_str() {
            "given" => Some(StepKeyword::Given),
            "when" => Some(StepKeyword::When),
            "then" => Some(StepKeyword::Then),
            _ => None,
        }
    }
}

impl fmt::Display for StepKeyword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepKeyword::Given => "Given",
            StepKeyword::When => "When",
            StepKeyword::Then => "Then",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct StepSkeleton {
    pub keyword: StepKeyword,
    pub pattern: String,
    pub slug: String,
}

impl StepSkeleton {
    /// The pattern as an anchored regular expression: literal text is
    /// escaped and each `(.*)` stays a capture group.
    pub fn regex(&self) -> regex::Regex {
        let body = self.pattern.split("(.*)").map(regex::escape).collect::<Vec<_>>().join("(.*)");
        regex::Regex::new(&format!("^{body}$")).expect("escaped pattern")
    }

    pub fn capture_count(&self) -> usize {
        self.pattern.matches("(.*)").count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkeletonError {
    #[error("UnbalancedQuotes: {0}")]
    UnbalancedQuotes(String),
}

pub fn extract_skeleton(keyword: StepKeyword, step_text: &str) -> Result<StepSkeleton, SkeletonError> {
    let text = step_text.trim();
    if text.matches('"').count() % 2 == 1 {
        return Err(SkeletonError::UnbalancedQuotes(text.to_string()));
    }
    let mut pattern = format!("{keyword} ");
    let mut words = keyword.to_string().to_ascii_lowercase();
    let mut group = 0;
    for (i, part) in text.split('"').enumerate() {
        if i % 2 == 1 {
            group += 1;
            pattern.push_str("\"(.*)\"");
            words.push_str(&format!(" group{group} "));
        } else {
            pattern.push_str(part);
            words.push(' ');
            words.push_str(&part.to_ascii_lowercase());
        }
    }
    let mut slug = String::new();
    for c in words.chars() {
        if c.is_ascii_alphanumeric() {
            slug.push(c);
        } else if !slug.ends_with('_') {
            slug.push('_');
        }
    }
    let slug = slug.trim_end_matches('_').to_string();
    Ok(StepSkeleton { keyword, pattern: pattern.trim_end().to_string(), slug })
}

/// Keyword and text of every step in document order. Term-style clauses
/// contribute one step per conjunct; `And`/`But` inherit the previous
/// keyword.
pub fn document_steps(doc: &FeatureDoc) -> Vec<(StepKeyword, String)> {
    let mut out = Vec::new();
    for sc in &doc.scenarios {
        if sc.is_prose() {
            let mut last = StepKeyword::Given;
            for p in &sc.prose {
                let kw = StepKeyword::parse(&p.keyword).unwrap_or(last);
                last = kw;
                out.push((kw, p.text.clone()));
            }
        } else {
            out.extend(sc.given.iter().map(|t| (StepKeyword::Given, t.to_string())));
            out.extend(sc.when.iter().map(|t| (StepKeyword::When, t.to_string())));
            out.extend(sc.then.iter().map(|t| (StepKeyword::Then, t.to_string())));
        }
    }
    out
}

pub fn emit_skeletons(doc: &FeatureDoc) -> Result<Vec<StepSkeleton>, SkeletonError> {
    let mut seen = BTreeSet::new();
    let mut slugs = BTreeSet::new();
    let mut out = Vec::new();
    for (kw, text) in document_steps(doc) {
        let mut sk = extract_skeleton(kw, &text)?;
        if !seen.insert((sk.keyword, sk.pattern.clone())) {
            continue;
        }
        let base = sk.slug.clone();
        let mut n = 1;
        while !slugs.insert(sk.slug.clone()) {
            n += 1;
            sk.slug = format!("{base}_{n}");
        }
        out.push(sk);
    }
    Ok(out)
}

/// Pretty-printed JSON array with keys in the order keyword, pattern, slug.
pub fn skeletons_json(skeletons: &[StepSkeleton]) -> String {
    serde_json::to_string_pretty(skeletons).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoted_text_becomes_a_group() {
        let s = extract_skeleton(StepKeyword::Given, "at \"x\" and \"y\"").unwrap();
        assert_eq!(s.pattern, "Given at \"(.*)\" and \"(.*)\"");
        assert_eq!(s.slug, "given_at_group1_and_group2");
        assert!(s.regex().is_match("Given at \"x\" and \"y\""));
    }

    #[test]
    fn single_token() {
        let s = extract_skeleton(StepKeyword::When, "X").unwrap();
        assert_eq!((s.pattern.as_str(), s.slug.as_str()), ("When X", "when_x"));
    }

    #[test]
    fn unbalanced() {
        assert!(matches!(
            extract_skeleton(StepKeyword::Then, "a \"b"),
            Err(SkeletonError::UnbalancedQuotes(_))
        ));
    }

    #[test]
    fn regex_escapes_literals() {
        let s = extract_skeleton(StepKeyword::Then, "cost is $5 (net) \"v\"").unwrap();
        assert!(s.regex().is_match("Then cost is $5 (net) \"anything\""));
    }
}
