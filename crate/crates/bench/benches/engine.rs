use criterion::{black_box, criterion_group, criterion_main, Criterion};
use outraag::decision::analyze;
use outraag::graph_core::{domination_data, find_sils};
use outraag::homo_rep::{build_cover_complex, homology_dims, FreeProductShape};
use outraag::standard_rep::verify_splitting_relations;
use outraag_cli::census::{canonical_code, graphs_on};
use outraag_cli::load_fixture;

fn fixtures(c: &mut Criterion) {
    for name in ["pentagon.txt", "fig1.txt", "fig4.txt", "fig5.txt"] {
        let g = load_fixture(name).expect("fixture");
        c.bench_function(&format!("analyze/{name}"), |b| b.iter(|| analyze(black_box(&g))));
    }
    let g = load_fixture("fig1.txt").expect("fixture");
    c.bench_function("domination/fig1", |b| b.iter(|| domination_data(black_box(&g))));
    c.bench_function("sils/fig1", |b| b.iter(|| find_sils(black_box(&g))));
    let p4 = load_fixture("p4.txt").expect("fixture");
    let dd = domination_data(&p4);
    c.bench_function("splitting/p4", |b| b.iter(|| verify_splitting_relations(black_box(&p4), &dd)));
}

fn census(c: &mut Criterion) {
    c.bench_function("graphs_on/6", |b| b.iter(|| graphs_on(black_box(6))));
    let g = outraag::SimplicialGraph::cycle(&["a", "b", "c", "d", "e", "f", "g"]);
    c.bench_function("canonical_code/c7", |b| b.iter(|| canonical_code(black_box(&g))));
}

fn homology(c: &mut Criterion) {
    let shape = FreeProductShape::new(vec![2, 2, 3], 2).expect("shape");
    c.bench_function("cover_homology/2,2,3:2", |b| {
        b.iter(|| homology_dims(&build_cover_complex(black_box(&shape))))
    });
}

criterion_group!(benches, fixtures, census, homology);
criterion_main!(benches);
