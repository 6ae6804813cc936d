use outraag::decision::{analyze, Verdict};
use outraag::graph_core::{dominates_by_shortcut, domination_data, find_sils};
use outraag::homo_rep::{build_cover_complex, homology_dims, FreeProductShape};
use outraag::linalg::ints;
use outraag::principality::span_all_ones_of;
use outraag::raag_words::{compose, equal_in_aut, transvection, Automorphism};
use outraag::standard_rep::{
    abelianised, augment, class_dag, is_lower_block_triangular, q_generator, vertex_ordering, verify_splitting_relations,
};
use outraag::SimplicialGraph;
use proptest::prelude::*;

fn graph() -> impl Strategy<Value = SimplicialGraph> {
    (0usize..=7, any::<u64>()).prop_map(|(n, bits)| {
        let pairs = n * n.saturating_sub(1) / 2;
        SimplicialGraph::from_upper_bits(n, bits & ((1u64 << pairs) - 1))
    })
}

fn small_graph() -> impl Strategy<Value = SimplicialGraph> {
    (0usize..=5, any::<u64>()).prop_map(|(n, bits)| {
        let pairs = n * n.saturating_sub(1) / 2;
        SimplicialGraph::from_upper_bits(n, bits & ((1u64 << pairs) - 1))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn domination_is_a_preorder(g in graph()) {
        let dd = domination_data(&g);
        for u in 0..g.n() {
            prop_assert!(dd.leq(u, u));
            for v in 0..g.n() {
                prop_assert_eq!(dd.leq(u, v), dominates_by_shortcut(&g, u, v));
                for w in 0..g.n() {
                    if dd.leq(u, v) && dd.leq(v, w) {
                        prop_assert!(dd.leq(u, w));
                    }
                }
            }
        }
    }

    #[test]
    fn ordering_respects_domination(g in graph()) {
        let dd = domination_data(&g);
        let ord = vertex_ordering(&dd);
        let mut pos = vec![0; g.n()];
        for (i, &v) in ord.iter().enumerate() {
            pos[v] = i;
        }
        for u in 0..g.n() {
            for v in 0..g.n() {
                if dd.leq(u, v) {
                    prop_assert!(pos[u] <= pos[v] || dd.equivalent(u, v));
                }
            }
        }
        for c in &dd.classes {
            let ps: Vec<usize> = c.iter().map(|v| pos[v]).collect();
            prop_assert_eq!(ps.iter().max().unwrap() - ps.iter().min().unwrap() + 1, ps.len());
        }
    }

    #[test]
    fn transvections_map_to_triangular_elementary_matrices(g in graph()) {
        let dd = domination_data(&g);
        let ord = vertex_ordering(&dd);
        for u in 0..g.n() {
            for v in dd.above[u].without(u) {
                let m = q_generator(&g, &dd, &ord, u, v).unwrap();
                prop_assert!(is_lower_block_triangular(&dd, &ord, &m));
                let r = transvection(&g, &dd, u, v).unwrap();
                prop_assert_eq!(abelianised(&ord, &r), m);
                let back = compose(&g, &r, &r.inverse());
                prop_assert!(equal_in_aut(&g, &back, &Automorphism::identity(&g)));
            }
        }
    }

    #[test]
    fn class_dags_are_transitive(g in graph()) {
        let dd = domination_data(&g);
        let dag = class_dag(&dd);
        prop_assert!(dag.check_invariants().is_ok());
        prop_assert_eq!(dag.sizes().iter().sum::<usize>(), g.n());
        for i in 0..dag.len() {
            let aug = augment(&dag, i).unwrap();
            prop_assert!(aug.check_invariants().is_ok());
            prop_assert!(aug.has_edge(0, 0) && aug.has_edge(0, i + 1));
        }
    }

    #[test]
    fn no_sil_graphs_split(g in small_graph()) {
        if find_sils(&g).is_empty() {
            let rep = verify_splitting_relations(&g, &domination_data(&g));
            prop_assert!(rep.ok(), "{:?}", rep.violations);
        }
    }

    #[test]
    fn reports_are_consistent(g in graph()) {
        let r = analyze(&g);
        prop_assert!(r.check_consistency().is_ok());
        if r.sils.is_empty() {
            prop_assert_ne!(r.property_t.verdict, Verdict::Unknown);
        }
        if r.finite_out {
            prop_assert_eq!(r.property_t.verdict, Verdict::Yes);
        }
    }

    #[test]
    fn span_certificates_verify(
        dim in 1usize..5,
        rows in prop::collection::vec(prop::collection::vec(0i64..2, 4), 0..5),
    ) {
        let vs: Vec<_> = rows.iter().map(|r| ints(&r[..dim])).collect();
        let cert = span_all_ones_of(&vs, dim);
        prop_assert!(cert.verify());
    }

    #[test]
    fn homology_dimensions_match(c in prop::collection::vec(1usize..4, 1..4), d in 1usize..4) {
        let shape = FreeProductShape::new(c.clone(), d).unwrap();
        let cx = build_cover_complex(&shape);
        prop_assert!(cx.check_invariants());
        let (h1, vm1) = homology_dims(&cx).unwrap();
        prop_assert_eq!(h1, c.iter().sum::<usize>() + shape.s() + 2 * d);
        prop_assert_eq!(vm1, d + shape.s());
    }
}
