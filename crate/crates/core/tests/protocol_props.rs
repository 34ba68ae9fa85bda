//! Property tests for the interaction DSL: render/parse round trips and
//! totality on arbitrary bytes.

use graphcot::graph::NodeId;
use graphcot::protocol::{parse_step, render_calls, InteractionCall};
use proptest::prelude::*;

fn id_strategy() -> impl Strategy<Value = NodeId> {
    "[a-z0-9][a-z0-9_.-]{0,11}".prop_map(|s| NodeId::new(s).expect("generated ids are valid"))
}

/// Second arguments of two-argument calls: no `]`, no newline, may contain
/// commas and spaces inside, trimmed.
fn word_arg_strategy() -> impl Strategy<Value = String> {
    "[a-zA-Z][a-zA-Z0-9 ,-]{0,18}[a-zA-Z0-9]".prop_map(|s| s.trim().to_string())
}

/// Verbatim arguments (queries, answers): printable, no newline, and never
/// containing the `, KnownName[` call-separator pattern.
fn verbatim_strategy() -> impl Strategy<Value = String> {
    "[a-zA-Z0-9][a-zA-Z0-9 ,.:()'\\[\\]-]{0,38}"
        .prop_map(|s| s.trim().to_string())
        .prop_filter("non-empty and separator-free", |s| {
            !s.is_empty() && !has_call_separator(s) && !s.ends_with(']')
        })
}

fn has_call_separator(s: &str) -> bool {
    let lower = s.to_lowercase();
    ["retrievenode", "nodefeature", "neighborcheck", "neighbourcheck", "nodedegree", "finish"]
        .iter()
        .any(|name| {
            lower
                .match_indices(name)
                .any(|(at, _)| lower[at + name.len()..].trim_start().starts_with('['))
        })
}

fn call_strategy() -> impl Strategy<Value = InteractionCall> {
    prop_oneof![
        verbatim_strategy().prop_map(|query| InteractionCall::RetrieveNode { query }),
        (id_strategy(), word_arg_strategy())
            .prop_map(|(id, feature)| InteractionCall::NodeFeature { id, feature }),
        (id_strategy(), word_arg_strategy())
            .prop_map(|(id, edge_type)| InteractionCall::NeighborCheck { id, edge_type }),
        (id_strategy(), word_arg_strategy())
            .prop_map(|(id, edge_type)| InteractionCall::NodeDegree { id, edge_type }),
    ]
}

/// Zero or more graph calls, optionally ending in Finish.
fn call_list_strategy() -> impl Strategy<Value = Vec<InteractionCall>> {
    (
        proptest::collection::vec(call_strategy(), 1..4),
        proptest::option::of(verbatim_strategy()),
    )
        .prop_map(|(mut calls, finish)| {
            if let Some(answer) = finish {
                calls.push(InteractionCall::Finish { answer });
            }
            calls
        })
}

proptest! {
    #[test]
    fn round_trip_parse_of_rendered_calls(calls in call_list_strategy(), step in 1usize..50) {
        let text = format!("Reasoning {step}: working on it.\nInteraction {step}: {}", render_calls(&calls));
        let parsed = parse_step(&text, step).expect("rendered calls parse");
        prop_assert_eq!(parsed.calls, calls);
        prop_assert_eq!(parsed.reasoning, "working on it.");
    }

    #[test]
    fn parser_is_total_on_arbitrary_bytes(bytes in proptest::collection::vec(any::<u8>(), 0..300)) {
        let text = String::from_utf8_lossy(&bytes);
        // a value or a structured error, never a panic
        let _ = parse_step(&text, 1);
    }

    #[test]
    fn parser_is_total_on_arbitrary_strings(text in "\\PC{0,200}") {
        let _ = parse_step(&text, 1);
    }

    #[test]
    fn textual_order_is_preserved(calls in call_list_strategy()) {
        let text = render_calls(&calls);
        let parsed = parse_step(&text, 1).expect("parses");
        let rendered_back = render_calls(&parsed.calls);
        prop_assert_eq!(rendered_back, text);
    }
}
