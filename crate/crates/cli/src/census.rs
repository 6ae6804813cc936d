//! Exhaustive small-graph census: enumeration up to isomorphism and the
//! property checks run over it.

use std::collections::{BTreeMap, BTreeSet};

use outraag::decision::{analyze, AnalysisReport, Verdict};
use outraag::graph_core::components_after_removal;
use outraag::principality::{condition_a2_prime, principal_pairs, virtually_obtained_from_dominated};
use outraag::raag_words::verify_pc_transvection_relations;
use outraag::standard_rep::{block_conditions, augment, block_of_class, class_dag, verify_splitting_relations};
use outraag::SimplicialGraph;
use rayon::prelude::*;
use serde::Serialize;

pub const MAX_CENSUS_VERTICES: usize = 7;

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Bit position of the pair `i < j`, counted from the most significant
/// end: pairs are listed `(0,1), (0,2), (1,2), (0,3), ..`.
fn pair_rank(i: usize, j: usize) -> usize {
    pair_count(j) + i
}

/// Adjacency code with pairs in the order of `pair_rank`, first pair most
/// significant.
pub fn code_of(g: &SimplicialGraph) -> u64 {
    let total = pair_count(g.n());
    g.edges()
        .into_iter()
        .fold(0, |acc, (u, v)| acc | 1 << (total - 1 - pair_rank(u.min(v), u.max(v))))
}

pub fn graph_of(n: usize, code: u64) -> SimplicialGraph {
    let total = pair_count(n);
    let mut edges = Vec::new();
    for j in 0..n {
        for i in 0..j {
            if code >> (total - 1 - pair_rank(i, j)) & 1 == 1 {
                edges.push((i, j));
            }
        }
    }
    SimplicialGraph::new((0..n).map(|i| i.to_string()).collect(), &edges).expect("small graph")
}

/// Least code over all relabellings, found by placing vertices one position
/// at a time and cutting branches whose prefix already exceeds the best.
pub fn canonical_code(g: &SimplicialGraph) -> u64 {
    let n = g.n();
    let total = pair_count(n);
    let mut best: Option<u64> = None;
    let mut perm = Vec::with_capacity(n);
    fn dfs(g: &SimplicialGraph, total: usize, perm: &mut Vec<usize>, used: u32, cur: u64, best: &mut Option<u64>) {
        let j = perm.len();
        if let Some(b) = *best {
            let placed = pair_count(j);
            if cur > b >> (total - placed) {
                return;
            }
        }
        if j == g.n() {
            *best = Some(best.map_or(cur, |b| b.min(cur)));
            return;
        }
        for v in 0..g.n() {
            if used >> v & 1 == 1 {
                continue;
            }
            let mut next = cur;
            for &p in perm.iter() {
                next = next << 1 | u64::from(g.adjacent(p, v));
            }
            perm.push(v);
            dfs(g, total, perm, used | 1 << v, next, best);
            perm.pop();
        }
    }
    dfs(g, total, &mut perm, 0, 0, &mut best);
    best.unwrap_or(0)
}

/// Canonical codes of all graphs on exactly `n` vertices, ascending.
pub fn graphs_on(n: usize) -> Vec<u64> {
    assert!(n <= MAX_CENSUS_VERTICES);
    if n == 0 {
        return vec![0];
    }
    let smaller = graphs_on(n - 1);
    let found: BTreeSet<u64> = smaller
        .par_iter()
        .flat_map_iter(|&code| {
            let base = graph_of(n - 1, code);
            (0u32..1 << (n - 1)).map(move |nbrs| {
                let mut edges = base.edges();
                edges.extend((0..n - 1).filter(|&i| nbrs >> i & 1 == 1).map(|i| (i, n - 1)));
                let g = SimplicialGraph::new((0..n).map(|i| i.to_string()).collect(), &edges).unwrap();
                canonical_code(&g)
            })
        })
        .collect();
    found.into_iter().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    All,
    A2Implication,
    AbelianClasses,
    BprimeEquiv,
    Relations,
    BlockConditions,
}

impl Check {
    fn includes(self, other: Check) -> bool {
        self == Check::All || self == other
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusViolation {
    pub check: String,
    pub n: usize,
    pub code: u64,
    pub edges: Vec<(usize, usize)>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub max_vertices: usize,
    pub graphs_per_size: BTreeMap<usize, usize>,
    /// Keyed `"YES rule 7"` and so on.
    pub verdicts: BTreeMap<String, usize>,
    /// Graphs each check applied to.
    pub checked: BTreeMap<String, usize>,
    pub violations: Vec<CensusViolation>,
}

impl CensusReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

struct GraphOutcome {
    verdict: String,
    applied: Vec<&'static str>,
    failures: Vec<(&'static str, String)>,
}

fn check_graph(g: &SimplicialGraph, check: Check) -> GraphOutcome {
    let rep = analyze(g);
    let mut applied = vec!["verdicts"];
    let mut failures = Vec::new();
    verdict_invariants(&rep, &mut failures);
    let no_sil = rep.sils.is_empty();

    if check.includes(Check::A2Implication) {
        applied.push("a2-implication");
        if rep.a2prime.holds && !rep.a2.holds {
            failures.push(("a2-implication", "(A2') holds but (A2) fails".into()));
        }
    }
    if check.includes(Check::AbelianClasses) && no_sil && rep.a1.holds {
        applied.push("abelian-classes");
        if !rep.dd.all_classes_abelian() {
            failures.push(("abelian-classes", "no SIL and (A1) with a free class".into()));
        }
    }
    if check.includes(Check::BprimeEquiv) {
        applied.push("bprime-equiv");
        let a2p = condition_a2_prime(g, &rep.dd).0;
        let every = (0..g.n()).all(|x| {
            components_after_removal(g, g.star(x)).into_iter().all(|c| {
                virtually_obtained_from_dominated(g, &rep.dd, x, c)
                    .map(|cert| cert.member)
                    .unwrap_or(false)
            })
        });
        if a2p != every {
            failures.push((
                "bprime-equiv",
                format!("(A2') is {a2p} but dominated-support membership for every pair is {every}"),
            ));
        }
    }
    if check.includes(Check::Relations) {
        applied.push("pc-transvection-relations");
        let r = verify_pc_transvection_relations(g, &rep.dd);
        if let Some(v) = r.violations.first() {
            failures.push((
                "pc-transvection-relations",
                format!("{} violations, first {:?}", r.violations.len(), v),
            ));
        }
        if no_sil {
            applied.push("splitting-relations");
            let s = verify_splitting_relations(g, &rep.dd);
            if let Some(v) = s.violations.first() {
                failures.push((
                    "splitting-relations",
                    format!("{} violations, first {:?}", s.violations.len(), v),
                ));
            }
        }
    }
    if check.includes(Check::BlockConditions) && no_sil && rep.a1.holds && rep.a2prime.holds {
        applied.push("block-conditions");
        let dag = class_dag(&rep.dd);
        for (class, c) in principal_pairs(g, &rep.dd) {
            let ci = rep.dd.class_of[class.first().expect("nonempty class")];
            let block = block_of_class(&dag, ci).expect("every class has a block");
            let aug = augment(&dag, block).expect("valid block");
            let bc = block_conditions(&aug);
            if let Err(e) = aug.check_invariants() {
                failures.push(("block-conditions", e.to_string()));
            }
            if !bc.all_hold() {
                failures.push((
                    "block-conditions",
                    format!("pair ({}, {}): {:?}", g.format_set(class), g.format_set(c), bc),
                ));
            }
        }
    }

    GraphOutcome {
        verdict: format!("{} {}", rep.property_t.verdict, rep.property_t.rule),
        applied,
        failures,
    }
}

fn verdict_invariants(rep: &AnalysisReport, failures: &mut Vec<(&'static str, String)>) {
    if let Err(e) = rep.check_consistency() {
        failures.push(("verdicts", e));
    }
    let v = rep.property_t.verdict;
    if rep.sils.is_empty() && v == Verdict::Unknown {
        failures.push(("verdicts", "no SIL but verdict unknown".into()));
    }
    if rep.finite_out && v != Verdict::Yes {
        failures.push(("verdicts", "finite Out(A_Γ) without property (T)".into()));
    }
    if rep.virtually_nilpotent && !rep.finite_out && v != Verdict::No {
        failures.push(("verdicts", "infinite virtually nilpotent Out(A_Γ) with property (T)".into()));
    }
    if let Some(e) = &rep.witness_error {
        failures.push(("verdicts", format!("indicability witness failed: {e}")));
    }
}

/// Runs `check` on every graph with at most `max_vertices` vertices.
pub fn run_census(max_vertices: usize, check: Check) -> Result<CensusReport, crate::CliError> {
    if max_vertices > MAX_CENSUS_VERTICES {
        return Err(crate::CliError::Usage(format!(
            "--max-vertices is at most {MAX_CENSUS_VERTICES}, got {max_vertices}"
        )));
    }
    let mut all = Vec::new();
    let mut report = CensusReport {
        max_vertices,
        ..Default::default()
    };
    for n in 0..=max_vertices {
        let codes = graphs_on(n);
        report.graphs_per_size.insert(n, codes.len());
        all.extend(codes.into_iter().map(|c| (n, c)));
    }
    let outcomes: Vec<GraphOutcome> = all
        .par_iter()
        .map(|&(n, code)| check_graph(&graph_of(n, code), check))
        .collect();
    for (&(n, code), out) in all.iter().zip(outcomes) {
        *report.verdicts.entry(out.verdict).or_default() += 1;
        for a in out.applied {
            *report.checked.entry(a.to_string()).or_default() += 1;
        }
        for (name, detail) in out.failures {
            report.violations.push(CensusViolation {
                check: name.to_string(),
                n,
                code,
                edges: graph_of(n, code).edges(),
                detail,
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_known_sequence() {
        let counts: Vec<usize> = (0..=5).map(|n| graphs_on(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 4, 11, 34]);
    }

    #[test]
    fn code_round_trip_and_invariance() {
        let p4 = SimplicialGraph::path(&["a", "b", "c", "d"]);
        let c = canonical_code(&p4);
        assert_eq!(canonical_code(&graph_of(4, c)), c);
        assert_eq!(canonical_code(&p4.permuted(&[2, 0, 3, 1])), c);
        assert_eq!(code_of(&graph_of(4, 0b101101)), 0b101101);
        assert_ne!(canonical_code(&SimplicialGraph::cycle(&["a", "b", "c", "d"])), c);
    }

    #[test]
    fn oversized_census_refused() {
        assert!(matches!(run_census(8, Check::All), Err(crate::CliError::Usage(_))));
    }
}
