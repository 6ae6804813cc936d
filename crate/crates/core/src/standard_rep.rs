//! The action on the abelianisation: vertex ordering, the elementary-matrix
//! images of transvections, the class DAG and its one-vertex augmentation,
//! the block-triangular (T) conditions, and the splitting relations.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph_core::{find_sils_with, DominationData, SimplicialGraph};
use crate::raag_words::{
    compose_all, equal_in_aut, equal_in_out_with_witness, transvection, Automorphism, Letter, Word,
};

pub type IntMatrix = Vec<Vec<i64>>;

/// Classes in topological order of the domination preorder, smallest
/// available class first; vertices ascending inside a class.
pub fn vertex_ordering(dd: &DominationData) -> Vec<usize> {
    class_order(dd)
        .into_iter()
        .flat_map(|c| dd.classes[c].iter())
        .collect()
}

fn class_order(dd: &DominationData) -> Vec<usize> {
    let r = dd.classes.len();
    let mut placed = vec![false; r];
    let mut out = Vec::with_capacity(r);
    while out.len() < r {
        // Classes are indexed by their smallest vertex, so the first ready
        // index is the least-vertex choice.
        let next = (0..r)
            .find(|&c| {
                !placed[c]
                    && (0..r).all(|b| placed[b] || b == c || !dd.class_above[b].contains(c))
            })
            .expect("domination is a preorder");
        placed[next] = true;
        out.push(next);
    }
    out
}

fn positions(ordering: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; ordering.len()];
    for (i, &v) in ordering.iter().enumerate() {
        pos[v] = i;
    }
    pos
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_product(ms: &[&IntMatrix]) -> IntMatrix {
    let n = ms.first().map_or(0, |m| m.len());
    ms.iter().fold(identity(n), |acc, m| mat_mul(&acc, m))
}

fn elementary(n: usize, row: usize, col: usize, k: i64) -> IntMatrix {
    let mut m = identity(n);
    m[row][col] += k;
    m
}

/// Image of `R_u^v`: the identity plus a 1 in entry `(pos(v), pos(u))`.
pub fn q_generator(g: &SimplicialGraph, dd: &DominationData, ordering: &[usize], u: usize, v: usize) -> Result<IntMatrix> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v || !dd.leq(u, v) {
        return Err(Error::Precondition(format!(
            "`{}` <= `{}` with distinct vertices",
            g.name(u),
            g.name(v)
        )));
    }
    let pos = positions(ordering);
    Ok(elementary(g.n(), pos[v], pos[u], 1))
}

/// Matrix of an automorphism on the abelianisation, in the given ordering.
/// Column `pos(v)` holds the exponent sums of the image of `v`.
pub fn abelianised(ordering: &[usize], f: &Automorphism) -> IntMatrix {
    let n = ordering.len();
    let pos = positions(ordering);
    let mut m = vec![vec![0; n]; n];
    for (v, w) in f.images.iter().enumerate() {
        for l in &w.0 {
            m[pos[l.v]][pos[v]] += i64::from(l.e);
        }
    }
    m
}

/// Whether every nonzero off-diagonal entry sits in a block on or below the
/// diagonal, blocks being the classes in the order used.
pub fn is_lower_block_triangular(dd: &DominationData, ordering: &[usize], m: &IntMatrix) -> bool {
    let order = class_order(dd);
    let mut rank = vec![0; order.len()];
    for (i, &c) in order.iter().enumerate() {
        rank[c] = i;
    }
    let block = |p: usize| rank[dd.class_of[ordering[p]]];
    (0..m.len()).all(|r| (0..m.len()).all(|c| m[r][c] == 0 || block(r) >= block(c)))
}

/// A partition of an integer interval into blocks, with a transitive edge
/// relation on the blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockSpec {
    pub blocks: Vec<Vec<usize>>,
    /// Class index behind each block; `None` for the added block `{0}`.
    pub classes: Vec<Option<usize>>,
    pub edges: BTreeSet<(usize, usize)>,
    pub augmented_from: Option<usize>,
}

impl BlockSpec {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i, j))
    }

    pub fn check_invariants(&self) -> Result<()> {
        let flat: Vec<usize> = self.blocks.iter().flatten().copied().collect();
        if flat.windows(2).any(|w| w[1] != w[0] + 1) {
            return Err(Error::Invariant("blocks do not partition an interval in order".into()));
        }
        if self.edges.iter().any(|&(i, j)| i > j || j >= self.len()) {
            return Err(Error::Invariant("edge goes backwards or out of range".into()));
        }
        for &(i, j) in &self.edges {
            for &(j2, k) in self.edges.range((j, 0)..(j + 1, 0)) {
                debug_assert_eq!(j2, j);
                if !self.has_edge(i, k) {
                    return Err(Error::Invariant(format!("edge relation not transitive at {i}->{j}->{k}")));
                }
            }
        }
        Ok(())
    }
}

/// Blocks are the classes in vertex-ordering order over positions `1..=n`;
/// an edge `V_i -> V_j` whenever `V_i <= V_j`.
pub fn class_dag(dd: &DominationData) -> BlockSpec {
    let order = class_order(dd);
    let mut next = 1;
    let mut blocks = Vec::new();
    for &c in &order {
        let len = dd.classes[c].len();
        blocks.push((next..next + len).collect());
        next += len;
    }
    let mut edges = BTreeSet::new();
    for (i, &a) in order.iter().enumerate() {
        for (j, &b) in order.iter().enumerate() {
            if dd.class_above[a].contains(b) {
                edges.insert((i, j));
            }
        }
    }
    BlockSpec {
        blocks,
        classes: order.into_iter().map(Some).collect(),
        edges,
        augmented_from: None,
    }
}

/// Prepends the block `{0}` with a self-loop and an edge to every block
/// that block `i` has an edge to.
pub fn augment(dag: &BlockSpec, i: usize) -> Result<BlockSpec> {
    if i >= dag.len() {
        return Err(Error::Precondition(format!("block index {i} out of range")));
    }
    if dag.classes.iter().any(Option::is_none) {
        return Err(Error::Precondition("blocks are already augmented".into()));
    }
    let mut blocks = vec![vec![0]];
    blocks.extend(dag.blocks.iter().cloned());
    let mut classes = vec![None];
    classes.extend(dag.classes.iter().copied());
    let mut edges: BTreeSet<(usize, usize)> = dag.edges.iter().map(|&(a, b)| (a + 1, b + 1)).collect();
    edges.insert((0, 0));
    for &(a, b) in &dag.edges {
        if a == i {
            edges.insert((0, b + 1));
        }
    }
    Ok(BlockSpec {
        blocks,
        classes,
        edges,
        augmented_from: Some(i),
    })
}

/// Block index of a class in `class_dag(dd)`.
pub fn block_of_class(dag: &BlockSpec, class: usize) -> Option<usize> {
    dag.classes.iter().position(|&c| c == Some(class))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockConditionReport {
    pub h1: bool,
    pub h2: bool,
    pub h3: bool,
    pub missing_self_loops: Vec<usize>,
    pub size_two_blocks: Vec<usize>,
    /// Edges between distinct singleton blocks with no block in between.
    pub uninterpolated: Vec<(usize, usize)>,
}

impl BlockConditionReport {
    pub fn all_hold(&self) -> bool {
        self.h1 && self.h2 && self.h3
    }
}

pub fn block_conditions(dag: &BlockSpec) -> BlockConditionReport {
    let r = dag.len();
    let missing_self_loops: Vec<usize> = (0..r).filter(|&i| !dag.has_edge(i, i)).collect();
    let size_two_blocks: Vec<usize> = (0..r).filter(|&i| dag.blocks[i].len() == 2).collect();
    let uninterpolated: Vec<(usize, usize)> = dag
        .edges
        .iter()
        .copied()
        .filter(|&(i, j)| {
            i != j
                && dag.blocks[i].len() == 1
                && dag.blocks[j].len() == 1
                && !(0..r).any(|k| k != i && k != j && dag.has_edge(i, k) && dag.has_edge(k, j))
        })
        .collect();
    BlockConditionReport {
        h1: missing_self_loops.is_empty(),
        h2: size_two_blocks.is_empty(),
        h3: uninterpolated.is_empty(),
        missing_self_loops,
        size_two_blocks,
        uninterpolated,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum SplittingRelation {
    /// `[E_v^w, E_u^v] = E_u^w` for `u <= v <= w`, `u != w`.
    Chain,
    /// `[E_u^v, E_x^y] = 1` for `u != y`, `v != x`.
    Commute,
    /// `(E_u^v (E_v^u)^-1 E_u^v)^4 = 1` for equivalent `u != v`.
    FourthPower,
    /// `E_u^v (E_v^u)^-1 E_u^v E_v^u (E_u^v)^-1 E_v^u = 1` on a class of size 2.
    SizeTwo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum CheckLevel {
    Matrix,
    Aut,
    /// Equality up to an inner automorphism by a short word in the class.
    Out,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingViolation {
    pub relation: SplittingRelation,
    pub level: CheckLevel,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SplittingReport {
    /// Instances checked per relation, in declaration order.
    pub checked: [usize; 4],
    pub violations: Vec<SplittingViolation>,
    /// Holds when there is no SIL `(x, y | z)` with `z <= x, y` and every
    /// class is abelian; splitting can hold even with SILs then.
    pub weak_hypotheses_hold: bool,
}

impl SplittingReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn failing(&self, rel: SplittingRelation) -> bool {
        self.violations.iter().any(|v| v.relation == rel)
    }
}

/// Length bound for inner witnesses on free classes.
const WITNESS_LENGTH: usize = 4;

fn reduced_words(alphabet: &[usize], max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &v in alphabet {
                for e in [1i8, -1] {
                    let l = Letter::new(v, e);
                    if w.0.last() == Some(&l.inverse()) {
                        continue;
                    }
                    let mut w2 = w.clone();
                    w2.0.push(l);
                    next.push(w2);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Runs every applicable instance of the four relations, on matrices and on
/// automorphisms.
pub fn verify_splitting_relations(g: &SimplicialGraph, dd: &DominationData) -> SplittingReport {
    let n = g.n();
    let ordering = vertex_ordering(dd);
    let mut report = SplittingReport::default();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| dd.above[u].without(u).iter().map(move |v| (u, v)))
        .collect();
    let r: Vec<Vec<Option<Automorphism>>> = (0..n)
        .map(|u| {
            (0..n)
                .map(|v| (u != v && dd.leq(u, v)).then(|| transvection(g, dd, u, v).expect("u <= v")))
                .collect()
        })
        .collect();
    let e = |u: usize, v: usize| q_generator(g, dd, &ordering, u, v).expect("u <= v");
    let id = Automorphism::identity(g);
    let idm = identity(n);
    let fail = |report: &mut SplittingReport, relation, level, vertices: Vec<usize>| {
        report.violations.push(SplittingViolation {
            relation,
            level,
            vertices,
        });
    };

    for &(u, v) in &pairs {
        for w in dd.above[v].without(v) {
            if w == u {
                continue;
            }
            report.checked[0] += 1;
            let (a, b, c) = (e(v, w), e(u, v), e(u, w));
            let lhs = mat_product(&[&a, &b, &inv_elem(&a), &inv_elem(&b)]);
            if lhs != c {
                fail(&mut report, SplittingRelation::Chain, CheckLevel::Matrix, vec![u, v, w]);
            }
            let (ra, rb) = (r[v][w].as_ref().unwrap(), r[u][v].as_ref().unwrap());
            let comm = compose_all(g, &[ra, rb, &ra.inverse(), &rb.inverse()]);
            if !equal_in_aut(g, &comm, r[u][w].as_ref().unwrap()) {
                fail(&mut report, SplittingRelation::Chain, CheckLevel::Aut, vec![u, v, w]);
            }
        }
    }

    for &(u, v) in &pairs {
        for &(x, y) in &pairs {
            if u == y || v == x || (u, v) >= (x, y) {
                continue;
            }
            report.checked[1] += 1;
            let (a, b) = (e(u, v), e(x, y));
            if mat_mul(&a, &b) != mat_mul(&b, &a) {
                fail(&mut report, SplittingRelation::Commute, CheckLevel::Matrix, vec![u, v, x, y]);
            }
            let (ra, rb) = (r[u][v].as_ref().unwrap(), r[x][y].as_ref().unwrap());
            if !equal_in_aut(g, &compose_all(g, &[ra, rb]), &compose_all(g, &[rb, ra])) {
                fail(&mut report, SplittingRelation::Commute, CheckLevel::Aut, vec![u, v, x, y]);
            }
        }
    }

    for &(u, v) in &pairs {
        if !dd.leq(v, u) {
            continue;
        }
        let abelian = dd.is_abelian(u);
        let witnesses = if abelian {
            Vec::new()
        } else {
            reduced_words(&dd.class(u).to_vec(), WITNESS_LENGTH)
        };
        let holds_in_aut_or_out = |f: &Automorphism| {
            if abelian {
                equal_in_aut(g, f, &id)
            } else {
                witnesses.iter().any(|w| equal_in_out_with_witness(g, f, &id, w))
            }
        };
        let level = if abelian { CheckLevel::Aut } else { CheckLevel::Out };
        let (a, b) = (e(u, v), e(v, u));
        let (ra, rb) = (r[u][v].as_ref().unwrap(), r[v][u].as_ref().unwrap());

        report.checked[2] += 1;
        let m = mat_product(&[&a, &inv_elem(&b), &a]);
        if mat_product(&[&m, &m, &m, &m]) != idm {
            fail(&mut report, SplittingRelation::FourthPower, CheckLevel::Matrix, vec![u, v]);
        }
        let f = compose_all(g, &[ra, &rb.inverse(), ra]);
        if !holds_in_aut_or_out(&f.pow(g, 4)) {
            fail(&mut report, SplittingRelation::FourthPower, level, vec![u, v]);
        }

        if dd.class(u).len() == 2 && u < v {
            report.checked[3] += 1;
            let m = mat_product(&[&a, &inv_elem(&b), &a, &b, &inv_elem(&a), &b]);
            if m != idm {
                fail(&mut report, SplittingRelation::SizeTwo, CheckLevel::Matrix, vec![u, v]);
            }
            let f = compose_all(g, &[ra, &rb.inverse(), ra, rb, &ra.inverse(), rb]);
            if !holds_in_aut_or_out(&f) {
                fail(&mut report, SplittingRelation::SizeTwo, level, vec![u, v]);
            }
        }
    }

    report.weak_hypotheses_hold = dd.all_classes_abelian()
        && !find_sils_with(g, dd)
            .iter()
            .any(|s| dd.leq(s.z, s.x) && dd.leq(s.z, s.y));
    report
}

/// Inverse of an elementary matrix `I + k e_{ij}` with `i != j`.
fn inv_elem(m: &IntMatrix) -> IntMatrix {
    let mut out = m.clone();
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            if i != j {
                *x = -*x;
            }
        }
    }
    out
}
