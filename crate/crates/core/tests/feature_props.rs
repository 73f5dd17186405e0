use flowspec::corpus::{random_model, GenLimits};
use flowspec::feature::TermRole;
use flowspec::ident::id;
use flowspec::*;
use proptest::collection::vec;
use proptest::prelude::*;

fn term(prefix: &'static str, role: TermRole) -> impl Strategy<Value = Term> {
    (1..6u8, any::<bool>()).prop_map(move |(k, neg)| Term {
        atom: id(&format!("{prefix}{k}")),
        negated: neg && role == TermRole::Guard,
        role,
    })
}

fn then_item() -> impl Strategy<Value = ThenItem> {
    prop_oneof![
        vec(1..6u8, 1..4).prop_map(|v| ThenItem::ActionSeq(v.iter().map(|k| id(&format!("a{k}"))).collect())),
        (1..6u8).prop_map(|k| ThenItem::StateTerm(id(&format!("S{k}")))),
        (1..4u8, 1..4u8).prop_map(|(p, c)| ThenItem::StateTerm(id(&format!("P{p}.C{c}")))),
    ]
}

fn scenario() -> impl Strategy<Value = Scenario> {
    (
        "[A-Za-z][a-z0-9]{0,6}( [a-z0-9]{1,5}){0,2}",
        vec(prop_oneof![term("S", TermRole::State), term("g", TermRole::Guard)], 1..4),
        vec(prop_oneof![term("e", TermRole::Event), term("g", TermRole::Guard)], 1..3),
        vec(then_item(), 1..4),
    )
        .prop_map(|(name, given, when, then)| Scenario { name, given, when, then, prose: Vec::new() })
}

fn doc() -> impl Strategy<Value = FeatureDoc> {
    ("[A-Z][a-z]{0,8}", "[a-z]{0,8}", vec(scenario(), 0..5)).prop_map(|(title, role, scenarios)| FeatureDoc {
        title,
        role,
        scenarios,
        ..FeatureDoc::default()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn parse_inverts_format(d in doc(), gherkin in any::<bool>()) {
        let style = if gherkin { Style::Gherkin } else { Style::PaperUpper };
        let n = d.normalized();
        let text = format_feature(&n, style);
        prop_assert_eq!(parse_feature(&text).unwrap(), n.clone());
        // formatting is a fixpoint after one parse
        prop_assert_eq!(format_feature(&parse_feature(&text).unwrap(), style), text);
    }

    #[test]
    fn emitted_documents_reparse_exactly(seed in 0u64..5000, strict in any::<bool>()) {
        let m = random_model(seed, GenLimits::default());
        let mode = if strict { Mode::Strict } else { Mode::PaperExact };
        let d = emit_feature(&m, mode).unwrap();
        prop_assert_eq!(parse_feature(&format_feature(&d, Style::PaperUpper)).unwrap(), d);
    }
}
