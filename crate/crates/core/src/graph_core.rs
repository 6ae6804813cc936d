//! Simplicial graphs, links and stars, components, the domination preorder
//! and separating intersections of links.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::vset::{VertexSet, MAX_VERTICES};

/// A finite simplicial graph. Vertices are numbered `0..n` in input order and
/// carry opaque string names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialGraph {
    names: Vec<String>,
    adj: Vec<VertexSet>,
    index: HashMap<String, usize>,
}

/// Incremental construction used by the parsers: vertices keep their order
/// of first appearance, repeated edges are idempotent.
#[derive(Default, Debug)]
pub struct GraphBuilder {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the index of `name`, adding it if new.
    pub fn vertex(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }

    pub fn edge(&mut self, u: &str, v: &str) -> Result<()> {
        if u == v {
            return Err(Error::SelfLoop(u.to_string()));
        }
        let a = self.vertex(u);
        let b = self.vertex(v);
        self.edges.push((a, b));
        Ok(())
    }

    pub fn build(self) -> Result<SimplicialGraph> {
        SimplicialGraph::new(self.names, &self.edges)
    }
}

impl SimplicialGraph {
    /// Builds a graph from vertex names and index pairs.
    pub fn new(names: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        if names.len() > MAX_VERTICES {
            return Err(Error::TooManyVertices(names.len()));
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(name.clone()));
            }
        }
        let n = names.len();
        let mut adj = vec![VertexSet::EMPTY; n];
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange(u));
            }
            if v >= n {
                return Err(Error::VertexOutOfRange(v));
            }
            if u == v {
                return Err(Error::SelfLoop(names[u].clone()));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(SimplicialGraph { names, adj, index })
    }

    /// Builds a graph from names and named edges.
    pub fn from_named(names: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        let mut b = GraphBuilder::new();
        for name in names {
            b.vertex(name);
        }
        for (u, v) in edges {
            b.edge(u, v)?;
        }
        b.build()
    }

    /// Graph on vertices named `0..n` whose edges are the set bits of
    /// `bits` read against the pairs `(0,1),(0,2),..,(n-2,n-1)`, with the first
    /// pair at the most significant position.
    pub fn from_upper_bits(n: usize, bits: u64) -> Self {
        let pairs = n * n.saturating_sub(1) / 2;
        let mut edges = Vec::new();
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                if bits >> (pairs - 1 - k) & 1 == 1 {
                    edges.push((u, v));
                }
                k += 1;
            }
        }
        let names = (0..n).map(|i| i.to_string()).collect();
        SimplicialGraph::new(names, &edges).expect("census graphs are small")
    }

    pub fn edgeless(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        SimplicialGraph::new(names, &[]).unwrap()
    }

    pub fn complete(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        SimplicialGraph::new(names, &edges).unwrap()
    }

    /// Path through the named vertices in order.
    pub fn path(names: &[&str]) -> Self {
        let edges: Vec<_> = names.windows(2).map(|w| (w[0], w[1])).collect();
        Self::from_named(names, &edges).unwrap()
    }

    /// Cycle through the named vertices in order.
    pub fn cycle(names: &[&str]) -> Self {
        let mut edges: Vec<_> = names.windows(2).map(|w| (w[0], w[1])).collect();
        if names.len() > 2 {
            edges.push((names[names.len() - 1], names[0]));
        }
        Self::from_named(names, &edges).unwrap()
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    /// Vertex set from names.
    pub fn set_of(&self, names: &[&str]) -> Result<VertexSet> {
        names.iter().map(|s| self.index_of(s)).collect()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange(v))
        }
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn link(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    pub fn star(&self, v: usize) -> VertexSet {
        self.adj[v].with(v)
    }

    /// Union of stars.
    pub fn star_of_set(&self, s: VertexSet) -> VertexSet {
        s.iter().fold(s, |acc, v| acc.union(self.adj[v]))
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n() {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    /// Graph obtained by sending vertex `v` to position `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.n();
        let mut names = vec![String::new(); n];
        for v in 0..n {
            names[perm[v]] = self.names[v].clone();
        }
        let edges: Vec<_> = self.edges().into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
        SimplicialGraph::new(names, &edges).unwrap()
    }

    /// Whether `perm` is an automorphism of the graph.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        let n = self.n();
        if perm.len() != n {
            return false;
        }
        let mut seen = VertexSet::EMPTY;
        for &p in perm {
            if p >= n || seen.contains(p) {
                return false;
            }
            seen.insert(p);
        }
        self.edges().into_iter().all(|(u, v)| self.adjacent(perm[u], perm[v]))
    }

    pub fn format_set(&self, s: VertexSet) -> String {
        let parts: Vec<&str> = s.iter().map(|v| self.name(v)).collect();
        format!("{{{}}}", parts.join(","))
    }

    pub fn set_names(&self, s: VertexSet) -> Vec<String> {
        s.iter().map(|v| self.names[v].clone()).collect()
    }
}

/// Link and star of `v`.
pub fn local_structure(g: &SimplicialGraph, v: usize) -> Result<(VertexSet, VertexSet)> {
    g.check_vertex(v)?;
    Ok((g.link(v), g.star(v)))
}

/// Connected components of the subgraph induced on the complement of
/// `removed`, ordered by their smallest vertex.
pub fn components_after_removal(g: &SimplicialGraph, removed: VertexSet) -> Vec<VertexSet> {
    components_within(g, g.vertices().difference(removed))
}

/// Connected components of the subgraph induced on `within`.
pub fn components_within(g: &SimplicialGraph, within: VertexSet) -> Vec<VertexSet> {
    let mut left = within;
    let mut out = Vec::new();
    while let Some(start) = left.first() {
        let mut comp = VertexSet::singleton(start);
        let mut frontier = comp;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier {
                next = next.union(g.link(v));
            }
            next = next.intersection(within).difference(comp);
            comp = comp.union(next);
            frontier = next;
        }
        left = left.difference(comp);
        out.push(comp);
    }
    out
}

/// The component of `within` containing `v`.
pub fn component_containing(g: &SimplicialGraph, within: VertexSet, v: usize) -> VertexSet {
    let mut comp = VertexSet::singleton(v);
    let mut frontier = comp;
    while !frontier.is_empty() {
        let mut next = VertexSet::EMPTY;
        for u in frontier {
            next = next.union(g.link(u));
        }
        next = next.intersection(within).difference(comp);
        comp = comp.union(next);
        frontier = next;
    }
    comp
}

/// Components of the complement of the star of a base vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentIndex {
    pub base: usize,
    pub components: Vec<VertexSet>,
}

impl ComponentIndex {
    pub fn position(&self, c: VertexSet) -> Option<usize> {
        self.components.iter().position(|&d| d == c)
    }

    /// Index of the component containing `v`, if any.
    pub fn containing(&self, v: usize) -> Option<usize> {
        self.components.iter().position(|d| d.contains(v))
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

pub fn x_components(g: &SimplicialGraph, x: usize) -> Result<ComponentIndex> {
    g.check_vertex(x)?;
    Ok(ComponentIndex {
        base: x,
        components: components_after_removal(g, g.star(x)),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClassKind {
    Singleton,
    Abelian,
    Free,
}

/// The domination preorder `u <= v :<=> lk(u) ⊆ st(v)` and its classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominationData {
    /// `above[u]` is the set of `v` with `u <= v`.
    pub above: Vec<VertexSet>,
    /// `below[v]` is the set of `u` with `u <= v`.
    pub below: Vec<VertexSet>,
    /// Equivalence classes, ordered by smallest vertex.
    pub classes: Vec<VertexSet>,
    pub kinds: Vec<ClassKind>,
    pub class_of: Vec<usize>,
    /// `class_above[i]` is the set of class indices `j` with `[i] <= [j]`.
    pub class_above: Vec<VertexSet>,
}

impl DominationData {
    pub fn leq(&self, u: usize, v: usize) -> bool {
        self.above[u].contains(v)
    }

    pub fn equivalent(&self, u: usize, v: usize) -> bool {
        self.class_of[u] == self.class_of[v]
    }

    pub fn class(&self, v: usize) -> VertexSet {
        self.classes[self.class_of[v]]
    }

    pub fn kind_of(&self, v: usize) -> ClassKind {
        self.kinds[self.class_of[v]]
    }

    /// Singleton classes count as abelian.
    pub fn is_abelian(&self, v: usize) -> bool {
        self.kind_of(v) != ClassKind::Free
    }

    pub fn all_classes_abelian(&self) -> bool {
        self.kinds.iter().all(|&k| k != ClassKind::Free)
    }

    /// Vertices `u` with `u <= v` and `u` outside the class of `v`.
    pub fn strictly_below_class(&self, v: usize) -> VertexSet {
        self.below[v].difference(self.class(v))
    }

    /// Whether `v`'s class is minimal among classes meeting `within`.
    pub fn is_minimal_in(&self, v: usize, within: VertexSet) -> bool {
        self.strictly_below_class(v).intersection(within).is_empty()
    }
}

pub fn domination_data(g: &SimplicialGraph) -> DominationData {
    let n = g.n();
    let mut above = vec![VertexSet::EMPTY; n];
    let mut below = vec![VertexSet::EMPTY; n];
    for u in 0..n {
        for v in 0..n {
            if g.link(u).is_subset(g.star(v)) {
                above[u].insert(v);
                below[v].insert(u);
            }
        }
    }
    let mut class_of = vec![usize::MAX; n];
    let mut classes = Vec::new();
    let mut kinds = Vec::new();
    for v in 0..n {
        if class_of[v] != usize::MAX {
            continue;
        }
        let class = above[v].intersection(below[v]);
        let id = classes.len();
        for u in class {
            class_of[u] = id;
        }
        let kind = if class.len() == 1 {
            ClassKind::Singleton
        } else if g.adjacent(class.first().unwrap(), class.without(v).first().unwrap()) {
            ClassKind::Abelian
        } else {
            ClassKind::Free
        };
        classes.push(class);
        kinds.push(kind);
    }
    let class_above = classes
        .iter()
        .map(|c| {
            let rep = c.first().unwrap();
            above[rep].iter().map(|v| class_of[v]).collect()
        })
        .collect();
    DominationData {
        above,
        below,
        classes,
        kinds,
        class_of,
        class_above,
    }
}

/// The star-containment characterisation of domination: adjacent vertices
/// compare by stars, non-adjacent ones by links.
pub fn dominates_by_shortcut(g: &SimplicialGraph, u: usize, v: usize) -> bool {
    if u == v {
        true
    } else if g.adjacent(u, v) {
        g.star(u).is_subset(g.star(v))
    } else {
        g.link(u).is_subset(g.link(v))
    }
}

/// A separating intersection of links `(x, y | z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SilWitness {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    /// Component of the complement of `lk(x) ∩ lk(y)` containing `z`.
    pub component_z: VertexSet,
    pub special: bool,
}

/// All SILs `(x, y | z)` with `x < y`.
pub fn find_sils(g: &SimplicialGraph) -> Vec<SilWitness> {
    find_sils_with(g, &domination_data(g))
}

pub fn find_sils_with(g: &SimplicialGraph, dd: &DominationData) -> Vec<SilWitness> {
    let n = g.n();
    let all = g.vertices();
    let mut out = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            if g.adjacent(x, y) {
                continue;
            }
            let common = g.link(x).intersection(g.link(y));
            let candidates = all.difference(g.star(x)).difference(g.star(y));
            let mut done = VertexSet::EMPTY;
            for z in candidates {
                if done.contains(z) {
                    continue;
                }
                let comp = component_containing(g, all.difference(common), z);
                let eligible = comp.intersection(candidates);
                done = done.union(eligible);
                if comp.contains(x) || comp.contains(y) {
                    continue;
                }
                for z in eligible {
                    let special = is_special_sil(g, dd, x, y, z);
                    out.push(SilWitness {
                        x,
                        y,
                        z,
                        component_z: comp,
                        special,
                    });
                }
            }
        }
    }
    out.sort_by_key(|s| (s.x, s.y, s.z));
    out
}

/// Whether a SIL `(x1, x2 | x3)` is special.
pub fn is_special_sil(g: &SimplicialGraph, dd: &DominationData, x1: usize, x2: usize, x3: usize) -> bool {
    let xs = [x1, x2, x3];
    if !xs.iter().all(|&v| dd.is_abelian(v)) {
        return false;
    }
    let classes = dd.class(x1).union(dd.class(x2)).union(dd.class(x3));
    for &xi in &xs {
        for &xj in &xs {
            let between = dd.above[xi].intersection(dd.below[xj]);
            if !between.is_subset(classes) {
                return false;
            }
        }
    }
    let triple: VertexSet = xs.iter().copied().collect();
    let mut dominators_below = VertexSet::EMPTY;
    for &xi in &xs {
        dominators_below = dominators_below.union(dd.below[xi]);
    }
    for u in dominators_below {
        let st = g.star(u);
        let rest = triple.difference(st);
        let ok = match rest.first() {
            None => true,
            Some(r) => {
                let comp = component_containing(g, g.vertices().difference(st), r);
                rest.is_subset(comp)
            }
        };
        if !ok {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pentagon() -> SimplicialGraph {
        SimplicialGraph::cycle(&["1", "2", "3", "4", "5"])
    }

    #[test]
    fn link_and_star() {
        let g = SimplicialGraph::path(&["a", "b", "c"]);
        let b = g.index_of("b").unwrap();
        let (lk, st) = local_structure(&g, b).unwrap();
        assert_eq!(lk, g.set_of(&["a", "c"]).unwrap());
        assert_eq!(st, g.vertices());
        let p = pentagon();
        let (lk, _) = local_structure(&p, 0).unwrap();
        assert_eq!(lk, p.set_of(&["2", "5"]).unwrap());
        let iso = SimplicialGraph::edgeless(1);
        assert_eq!(local_structure(&iso, 0).unwrap(), (VertexSet::EMPTY, VertexSet::singleton(0)));
        assert!(local_structure(&iso, 3).is_err());
    }

    #[test]
    fn removal_components() {
        let g = SimplicialGraph::path(&["a", "b", "c"]);
        assert_eq!(
            components_after_removal(&g, VertexSet::singleton(1)),
            vec![VertexSet::singleton(0), VertexSet::singleton(2)]
        );
        assert!(components_after_removal(&g, g.vertices()).is_empty());
        let p = pentagon();
        assert_eq!(components_after_removal(&p, p.star(0)), vec![p.set_of(&["3", "4"]).unwrap()]);
    }

    #[test]
    fn x_components_examples() {
        let k = SimplicialGraph::complete(4);
        assert!(x_components(&k, 2).unwrap().is_empty());
        let g = SimplicialGraph::path(&["a", "b", "c", "d"]);
        let ci = x_components(&g, 1).unwrap();
        assert_eq!(ci.components, vec![VertexSet::singleton(3)]);
    }

    #[test]
    fn domination_on_p4() {
        let g = SimplicialGraph::path(&["a", "b", "c", "d"]);
        let dd = domination_data(&g);
        let mut strict = Vec::new();
        for u in 0..4 {
            for v in 0..4 {
                if u != v && dd.leq(u, v) {
                    strict.push((g.name(u).to_string(), g.name(v).to_string()));
                }
            }
        }
        strict.sort();
        let want: Vec<(String, String)> = [("a", "b"), ("a", "c"), ("d", "b"), ("d", "c")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert_eq!(strict, want);
        assert!(dd.kinds.iter().all(|&k| k == ClassKind::Singleton));
    }

    #[test]
    fn complete_and_edgeless_classes() {
        let dd = domination_data(&SimplicialGraph::complete(4));
        assert_eq!(dd.classes, vec![VertexSet::full(4)]);
        assert_eq!(dd.kinds, vec![ClassKind::Abelian]);
        let dd = domination_data(&SimplicialGraph::edgeless(5));
        assert_eq!(dd.classes, vec![VertexSet::full(5)]);
        assert_eq!(dd.kinds, vec![ClassKind::Free]);
    }

    #[test]
    fn sil_examples() {
        let e3 = SimplicialGraph::edgeless(3);
        let sils = find_sils(&e3);
        let triples: Vec<_> = sils.iter().map(|s| (s.x, s.y, s.z)).collect();
        assert_eq!(triples, vec![(0, 1, 2), (0, 2, 1), (1, 2, 0)]);
        assert!(sils.iter().all(|s| !s.special));
        assert!(find_sils(&pentagon()).is_empty());
        assert!(find_sils(&SimplicialGraph::path(&["a", "b", "c", "d"])).is_empty());
    }

    #[test]
    fn sil_component_excludes_pair() {
        // Square a-b-c-d-a plus a disjoint edge e-f: lk(b) ∩ lk(d) = {a, c}.
        let g = SimplicialGraph::from_named(
            &["a", "b", "c", "d", "e", "f"],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"), ("e", "f")],
        )
        .unwrap();
        let sils = find_sils(&g);
        let b = g.index_of("b").unwrap();
        let d = g.index_of("d").unwrap();
        let e = g.index_of("e").unwrap();
        let s = sils.iter().find(|s| s.x == b && s.y == d && s.z == e).unwrap();
        assert_eq!(s.component_z, g.set_of(&["e", "f"]).unwrap());
        assert!(!s.component_z.contains(b));
    }

    #[test]
    fn builder_rejects_bad_input() {
        let mut b = GraphBuilder::new();
        assert_eq!(b.edge("a", "a"), Err(Error::SelfLoop("a".into())));
        assert!(SimplicialGraph::new(vec!["a".into(), "a".into()], &[]).is_err());
        let names: Vec<String> = (0..129).map(|i| i.to_string()).collect();
        assert_eq!(SimplicialGraph::new(names, &[]), Err(Error::TooManyVertices(129)));
    }

    #[test]
    fn upper_bits_layout() {
        // Highest bit is the pair (0,1).
        let g = SimplicialGraph::from_upper_bits(3, 0b100);
        assert_eq!(g.edges(), vec![(0, 1)]);
        let g = SimplicialGraph::from_upper_bits(3, 0b001);
        assert_eq!(g.edges(), vec![(1, 2)]);
    }
}
