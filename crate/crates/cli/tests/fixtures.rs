//! Re-checks every property documented in the fixture headers, then runs
//! the pipeline on them.

use outraag::graph_core::{components_after_removal, domination_data};
use outraag::indicability_pipeline::{self as pipe, Case};
use outraag::principality::{self, delta_system, span_all_ones};
use outraag::{SimplicialGraph, VertexSet};
use outraag_cli::load_fixture;

fn set(g: &SimplicialGraph, names: &[&str]) -> VertexSet {
    g.set_of(names).unwrap()
}

fn trip(g: &SimplicialGraph, name: &str) -> VertexSet {
    set(g, &[name, &format!("{name}_2"), &format!("{name}_3")])
}

fn delta_rows(g: &SimplicialGraph, c0: VertexSet) -> Vec<Vec<u8>> {
    let dd = domination_data(g);
    let x = g.index_of("x").unwrap();
    let mut rows = delta_system(g, &dd, x, c0).unwrap().distinct_vectors();
    rows.retain(|w| w.iter().any(|&b| b == 1));
    rows.sort();
    rows
}

#[test]
fn fig1_properties() {
    let g = load_fixture("fig1.txt").unwrap();
    let dd = domination_data(&g);
    let x = g.index_of("x").unwrap();
    for v in ["y", "z1", "z2", "z3"] {
        assert!(dd.leq(g.index_of(v).unwrap(), x), "{v} <= x");
    }
    let z3 = g.index_of("z3").unwrap();
    assert!(dd.leq(g.index_of("z1").unwrap(), z3));
    assert!(dd.leq(g.index_of("z2").unwrap(), z3));
    let comps = components_after_removal(&g, g.star(x));
    assert_eq!(comps, vec![set(&g, &["z1"]), set(&g, &["z2"]), set(&g, &["z3"])]);
    for c in comps {
        let rep = principality::is_principal(&g, &dd, dd.class(x), c).unwrap();
        assert!(!rep.principal);
        assert!(rep.certificate.verify());
    }
}

#[test]
fn fig2_properties() {
    let g = load_fixture("fig2.txt").unwrap();
    let dd = domination_data(&g);
    let x = g.index_of("x").unwrap();
    let comps = components_after_removal(&g, g.star(x));
    let want: Vec<VertexSet> = ["z0", "z1", "z2", "z3"].iter().map(|z| trip(&g, z)).collect();
    assert_eq!(comps, want);
    assert_eq!(delta_rows(&g, want[0]), vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
    let ds = delta_system(&g, &dd, x, want[0]).unwrap();
    let cert = span_all_ones(&ds);
    assert!(cert.member && cert.verify());
    assert_eq!(cert.minimal_power.unwrap(), 2.into());
}

#[test]
fn fig3_properties_and_shared_case() {
    let g = load_fixture("fig3.txt").unwrap();
    let dd = domination_data(&g);
    let x = g.index_of("x").unwrap();
    let comps = components_after_removal(&g, g.star(x));
    assert_eq!(comps.len(), 5);
    let pent = |z: &str| {
        set(&g, &[z, &format!("{z}a"), &format!("{z}b"), &format!("{z}c"), &format!("{z}d")])
    };
    assert_eq!(comps, vec![pent("z0"), pent("z1"), set(&g, &["z2"]), set(&g, &["z3"]), pent("z4")]);
    assert!(dd.leq(x, g.index_of("z0").unwrap()));
    assert_eq!(dd.below[x].without(x), set(&g, &["z2", "z3"]));
    assert!(g.link(x).intersection(dd.below[x]).is_empty());
    for c in [pent("z0"), pent("z1")] {
        assert!(principality::is_principal(&g, &dd, dd.class(x), c).unwrap().principal);
    }
    assert!(!principality::condition_a1(&g, &dd).0);

    let d = pipe::declutter_with(&g, &dd, x, pent("z0"), false).unwrap();
    assert_eq!(d.z[0], set(&g, &["z0"]));
    assert_eq!(d.z[1], set(&g, &["z1"]));
    assert!(d.y.is_empty());
    let (case, t) = pipe::classify_case(&g, &dd, &d).unwrap();
    assert_eq!(case, Case::Shared);
    assert_eq!(t, vec![1]);
    let red = pipe::reduce_shared(&g, &dd, &d, &t).unwrap();
    assert_eq!(red.lambda, set(&g, &["z0", "z1", "x"]));
    assert_eq!(red.shape.to_string(), "1,1:1");
    assert!(red.largeness_trigger);
    let (gens, _, _) = pipe::final_representation(&g, &d, &[0, 1], &red.shape, &[vec![1]]).unwrap();
    assert_eq!(gens[0].full, vec![vec![1, 0], vec![-2, 1]]);
    assert!(pipe::infinite_order_pgl2(&gens[0].full));
}

#[test]
fn fig4_properties_and_pipeline() {
    let g = load_fixture("fig4.txt").unwrap();
    let dd = domination_data(&g);
    let x = g.index_of("x").unwrap();
    assert_eq!(dd.below[x].without(x), trip(&g, "y1").union(trip(&g, "y2")));
    let comps = components_after_removal(&g, g.star(x));
    let want: Vec<VertexSet> = ["z0", "z1", "z2", "z3"].iter().map(|z| trip(&g, z)).collect();
    assert_eq!(comps, want);
    assert_eq!(delta_rows(&g, want[0]), vec![vec![0, 1, 1], vec![1, 1, 0]]);
    assert!(principality::is_principal(&g, &dd, dd.class(x), want[0]).unwrap().principal);
    assert!(principality::condition_a1(&g, &dd).0);

    assert_eq!(pipe::choose_driver(&g, &dd).unwrap(), Some((x, want[0])));
    let res = pipe::run_pipeline(&g, &dd, x, want[0]).unwrap();
    assert_eq!(res.case, Case::Separated);
    let sep = res.separated.as_ref().unwrap();
    assert!(sep.bad.is_empty());
    assert!(sep.deletions.is_empty());
    assert_eq!(res.shape.to_string(), "3,3,3,3:7");
    assert_eq!(res.pi, vec![vec![1, 1, 0], vec![0, 1, 1]]);
    assert_eq!(res.perp_basis, vec![vec![1, -1, 1]]);
    assert_eq!(res.abelian_rank, 1);
    assert_eq!(res.generator_matrices[0].restricted, vec![vec![1, 0], vec![-2, 1]]);
    assert!(res.u_multipliers_preserve_v, "{:?}", res.u_multiplier_failures);
}

#[test]
fn fig5_properties_and_pipeline() {
    let g = load_fixture("fig5.txt").unwrap();
    let dd = domination_data(&g);
    let x = g.index_of("x").unwrap();
    let comps = components_after_removal(&g, g.star(x));
    let zs: Vec<VertexSet> = (0..6).map(|i| trip(&g, &format!("z{i}"))).collect();
    assert_eq!(comps, zs);
    let u = trip(&g, "y1").union(trip(&g, "y2"));
    assert_eq!(dd.below[x].without(x), u);
    assert_eq!(delta_rows(&g, zs[0]), vec![vec![0, 0, 1, 1, 1], vec![1, 1, 1, 0, 0]]);

    let res = pipe::run_pipeline(&g, &dd, x, zs[0]).unwrap();
    assert_eq!(res.case, Case::Separated);
    let sep = res.separated.as_ref().unwrap();
    let mults: VertexSet = sep.bad.iter().map(|b| b.multiplier).collect();
    assert_eq!(mults, trip(&g, "z2").union(trip(&g, "z4")).union(trip(&g, "z5")));
    assert_eq!(sep.deletions, vec![(2, 1), (4, 5)]);
    assert_eq!(res.retained, vec![0, 1, 3, 5]);
    assert_eq!(res.pi, vec![vec![1, 1, 0], vec![0, 1, 1]]);
    assert_eq!(res.perp_basis, vec![vec![1, -1, 1]]);
    assert_eq!(res.abelian_rank, 1);
    let masks: Vec<(usize, Vec<i64>)> =
        res.generator_matrices.iter().map(|m| (m.component, m.mask.clone())).collect();
    // v = z1 - z3 + z5: C1 and C5 give v + 2x, C3 gives v - 2x, C0 gives v - 2x.
    assert_eq!(masks, vec![(0, vec![-1]), (1, vec![1]), (3, vec![-1]), (5, vec![1])]);
    assert!(res.u_multipliers_preserve_v, "{:?}", res.u_multiplier_failures);
}
