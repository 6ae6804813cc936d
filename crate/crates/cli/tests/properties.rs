use outraag::decision::analyze;
use outraag::SimplicialGraph;
use outraag_cli::census::{canonical_code, code_of, graph_of};
use outraag_cli::parse::{parse, to_text, Format};
use proptest::prelude::*;

fn graph() -> impl Strategy<Value = SimplicialGraph> {
    (0usize..=6, any::<u64>()).prop_map(|(n, bits)| {
        let pairs = n * n.saturating_sub(1) / 2;
        SimplicialGraph::from_upper_bits(n, bits & ((1u64 << pairs) - 1))
    })
}

fn graph_and_perm() -> impl Strategy<Value = (SimplicialGraph, Vec<usize>)> {
    graph().prop_flat_map(|g| {
        let n = g.n();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn formats_round_trip(g in graph()) {
        for f in [Format::EdgeList, Format::Dot, Format::Json] {
            let back = parse(&to_text(&g, f), f).unwrap();
            prop_assert_eq!(&back, &g);
        }
    }

    #[test]
    fn canonical_code_is_a_relabelling_invariant((g, perm) in graph_and_perm()) {
        let h = g.permuted(&perm);
        let c = canonical_code(&g);
        prop_assert_eq!(canonical_code(&h), c);
        prop_assert!(c <= code_of(&g));
        prop_assert_eq!(canonical_code(&graph_of(g.n(), c)), c);
    }

    #[test]
    fn verdicts_are_relabelling_invariant((g, perm) in graph_and_perm()) {
        let a = analyze(&g).property_t;
        let b = analyze(&g.permuted(&perm)).property_t;
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.rule, b.rule);
    }
}
