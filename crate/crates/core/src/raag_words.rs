//! Words in a right-angled Artin group and automorphisms given by images of
//! the vertices.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph_core::{component_containing, components_after_removal, DominationData, SimplicialGraph};
use crate::vset::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub v: usize,
    /// `+1` or `-1`.
    pub e: i8,
}

impl Letter {
    pub fn new(v: usize, e: i8) -> Self {
        debug_assert!(e == 1 || e == -1);
        Letter { v, e }
    }

    pub fn inverse(self) -> Self {
        Letter { v: self.v, e: -self.e }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn gen(v: usize) -> Self {
        Word(vec![Letter::new(v, 1)])
    }

    pub fn gen_inv(v: usize) -> Self {
        Word(vec![Letter::new(v, -1)])
    }

    /// Word from `(vertex, sign)` pairs.
    pub fn from_pairs(pairs: &[(usize, i8)]) -> Self {
        Word(pairs.iter().map(|&(v, e)| Letter::new(v, e)).collect())
    }

    /// `v^k`.
    pub fn power(v: usize, k: i32) -> Self {
        let e = if k >= 0 { 1 } else { -1 };
        Word((0..k.unsigned_abs()).map(|_| Letter::new(v, e)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn display<'a>(&'a self, g: &'a SimplicialGraph) -> WordDisplay<'a> {
        WordDisplay { w: self, g }
    }
}

pub struct WordDisplay<'a> {
    w: &'a Word,
    g: &'a SimplicialGraph,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.w.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.w.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.g.name(l.v))?;
            if l.e < 0 {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// Free reduction up to commutation. Each incoming letter scans back over
/// letters commuting with it; it cancels against the first letter on the
/// same vertex with opposite sign, so the cancelled pair is the one whose
/// right end is leftmost. The result has no cancellable pair, hence is
/// empty exactly when the word is trivial.
pub fn reduce(g: &SimplicialGraph, w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in &w.0 {
        let mut cancel = None;
        for j in (0..out.len()).rev() {
            let m = out[j];
            if m.v == l.v {
                if m.e != l.e {
                    cancel = Some(j);
                }
                break;
            }
            if !g.adjacent(m.v, l.v) {
                break;
            }
        }
        match cancel {
            Some(j) => {
                out.remove(j);
            }
            None => out.push(l),
        }
    }
    Word(out)
}

pub fn equal_in_raag(g: &SimplicialGraph, u: &Word, v: &Word) -> bool {
    reduce(g, &u.concat(&v.inverse())).is_empty()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutKind {
    Identity,
    /// `R_u^v : u ↦ uv`.
    Transvection { u: usize, v: usize },
    /// `π^v_C : c ↦ v^-1 c v` for `c` in the support.
    PartialConjugation { v: usize, support: VertexSet },
    Inversion(usize),
    GraphSymmetry(Vec<usize>),
    /// `g ↦ w^-1 g w`.
    Inner(Word),
    Composite,
}

/// An automorphism stored with the images of the vertices under it and
/// under its inverse.
#[derive(Clone, Debug)]
pub struct Automorphism {
    pub images: Vec<Word>,
    pub inverse_images: Vec<Word>,
    pub kind: AutKind,
}

impl Automorphism {
    pub fn identity(g: &SimplicialGraph) -> Self {
        let images: Vec<Word> = (0..g.n()).map(Word::gen).collect();
        Automorphism {
            inverse_images: images.clone(),
            images,
            kind: AutKind::Identity,
        }
    }

    pub fn inverse(&self) -> Self {
        Automorphism {
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
            kind: AutKind::Composite,
        }
    }

    pub fn apply(&self, g: &SimplicialGraph, w: &Word) -> Word {
        apply_images(g, &self.images, w)
    }

    pub fn pow(&self, g: &SimplicialGraph, k: i32) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Automorphism::identity(g);
        for _ in 0..k.unsigned_abs() {
            out = compose(g, &base, &out);
        }
        out
    }
}

fn apply_images(g: &SimplicialGraph, images: &[Word], w: &Word) -> Word {
    let mut out = Vec::new();
    for l in &w.0 {
        if l.e > 0 {
            out.extend_from_slice(&images[l.v].0);
        } else {
            out.extend(images[l.v].inverse().0);
        }
    }
    reduce(g, &Word(out))
}

/// Whether `support` avoids `st(v)` and is a union of components of its
/// complement.
pub fn is_union_of_components(g: &SimplicialGraph, v: usize, support: VertexSet) -> bool {
    if !support.is_disjoint(g.star(v)) {
        return false;
    }
    components_after_removal(g, g.star(v))
        .iter()
        .all(|c| c.is_subset(support) || c.is_disjoint(support))
}

pub fn make_generator(g: &SimplicialGraph, dd: &DominationData, kind: AutKind) -> Result<Automorphism> {
    let n = g.n();
    let mut images: Vec<Word> = (0..n).map(Word::gen).collect();
    let mut inverse_images = images.clone();
    match &kind {
        AutKind::Identity | AutKind::Composite => {
            if kind == AutKind::Composite {
                return Err(Error::InvalidGenerator("composite is not a generator".into()));
            }
        }
        &AutKind::Transvection { u, v } => {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v || !dd.leq(u, v) {
                return Err(Error::InvalidGenerator(format!(
                    "transvection needs {} <= {} with distinct vertices",
                    g.name(u),
                    g.name(v)
                )));
            }
            images[u] = Word::from_pairs(&[(u, 1), (v, 1)]);
            inverse_images[u] = Word::from_pairs(&[(u, 1), (v, -1)]);
        }
        &AutKind::PartialConjugation { v, support } => {
            g.check_vertex(v)?;
            if !support.is_subset(g.vertices()) || !is_union_of_components(g, v, support) {
                return Err(Error::InvalidGenerator(format!(
                    "{} is not a union of components of the complement of st({})",
                    g.format_set(support),
                    g.name(v)
                )));
            }
            for c in support {
                images[c] = Word::from_pairs(&[(v, -1), (c, 1), (v, 1)]);
                inverse_images[c] = Word::from_pairs(&[(v, 1), (c, 1), (v, -1)]);
            }
        }
        &AutKind::Inversion(v) => {
            g.check_vertex(v)?;
            images[v] = Word::gen_inv(v);
            inverse_images[v] = Word::gen_inv(v);
        }
        AutKind::GraphSymmetry(perm) => {
            if !g.is_automorphism(perm) {
                return Err(Error::InvalidGenerator("permutation is not a graph automorphism".into()));
            }
            for v in 0..n {
                images[v] = Word::gen(perm[v]);
                inverse_images[perm[v]] = Word::gen(v);
            }
        }
        AutKind::Inner(w) => {
            if w.0.iter().any(|l| l.v >= n) {
                return Err(Error::InvalidGenerator("inner word uses unknown vertex".into()));
            }
            return Ok(inner(g, w));
        }
    }
    Ok(Automorphism {
        images,
        inverse_images,
        kind,
    })
}

/// Transvection `R_u^v`.
pub fn transvection(g: &SimplicialGraph, dd: &DominationData, u: usize, v: usize) -> Result<Automorphism> {
    make_generator(g, dd, AutKind::Transvection { u, v })
}

/// Partial conjugation `π^v_support`.
pub fn partial_conjugation(g: &SimplicialGraph, dd: &DominationData, v: usize, support: VertexSet) -> Result<Automorphism> {
    make_generator(g, dd, AutKind::PartialConjugation { v, support })
}

pub fn inner(g: &SimplicialGraph, w: &Word) -> Automorphism {
    let images = (0..g.n())
        .map(|v| reduce(g, &w.inverse().concat(&Word::gen(v)).concat(w)))
        .collect();
    let inverse_images = (0..g.n())
        .map(|v| reduce(g, &w.concat(&Word::gen(v)).concat(&w.inverse())))
        .collect();
    Automorphism {
        images,
        inverse_images,
        kind: AutKind::Inner(w.clone()),
    }
}

/// `f ∘ h`.
pub fn compose(g: &SimplicialGraph, f: &Automorphism, h: &Automorphism) -> Automorphism {
    let images = h.images.iter().map(|w| f.apply(g, w)).collect();
    let inverse_images = f
        .inverse_images
        .iter()
        .map(|w| apply_images(g, &h.inverse_images, w))
        .collect();
    Automorphism {
        images,
        inverse_images,
        kind: AutKind::Composite,
    }
}

/// Composition of a list, rightmost applied first.
pub fn compose_all(g: &SimplicialGraph, fs: &[&Automorphism]) -> Automorphism {
    fs.iter()
        .rev()
        .fold(Automorphism::identity(g), |acc, f| compose(g, f, &acc))
}

/// `a ∘ b ∘ a^-1`.
pub fn conjugate(g: &SimplicialGraph, a: &Automorphism, b: &Automorphism) -> Automorphism {
    compose_all(g, &[a, b, &a.inverse()])
}

pub fn equal_in_aut(g: &SimplicialGraph, f: &Automorphism, h: &Automorphism) -> bool {
    f.images
        .iter()
        .zip(&h.images)
        .all(|(a, b)| equal_in_raag(g, a, b))
}

/// Whether `f(v) = w^-1 h(v) w` for every vertex `v`.
pub fn equal_in_out_with_witness(g: &SimplicialGraph, f: &Automorphism, h: &Automorphism, w: &Word) -> bool {
    f.images.iter().zip(&h.images).all(|(a, b)| {
        let conj = w.inverse().concat(b).concat(w);
        equal_in_raag(g, a, &conj)
    })
}

/// Out-level equality with witnesses `x^k`, `|k| <= bound`; returns the
/// exponent that works.
pub fn equal_in_out_by_powers(
    g: &SimplicialGraph,
    f: &Automorphism,
    h: &Automorphism,
    x: usize,
    bound: i32,
) -> Option<i32> {
    if equal_in_aut(g, f, h) {
        return Some(0);
    }
    (1..=bound)
        .flat_map(|k| [k, -k])
        .find(|&k| equal_in_out_with_witness(g, f, h, &Word::power(x, k)))
}

/// Whether `(x, y | z)` is a SIL.
pub fn is_sil(g: &SimplicialGraph, x: usize, y: usize, z: usize) -> bool {
    if x == y || y == z || x == z || g.adjacent(x, y) || g.adjacent(x, z) || g.adjacent(y, z) {
        return false;
    }
    let common = g.link(x).intersection(g.link(y));
    let comp = component_containing(g, g.vertices().difference(common), z);
    !comp.contains(x) && !comp.contains(y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationCase {
    Commute,
    SilConjugate,
    DominatingMultiplier,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationViolation {
    pub case: RelationCase,
    pub v: usize,
    pub component: VertexSet,
    pub x: usize,
    pub y: usize,
    pub sign: i8,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationReport {
    pub checked: [usize; 3],
    pub violations: Vec<RelationViolation>,
    /// Instances of the SIL case with `x ∈ C`, where the identity holds only
    /// after replacing `C` by its complement and flipping the sign.
    pub normalized_sign_flips: usize,
}

/// Witness bound for Out-level checks.
const POWER_BOUND: i32 = 2;

/// Exhaustive check of how partial conjugations and transvections conjugate
/// each other, over every `v`, every `v`-component `C`, every transvection
/// `R_x^y` and both signs.
pub fn verify_pc_transvection_relations(g: &SimplicialGraph, dd: &DominationData) -> RelationReport {
    let mut report = RelationReport::default();
    let n = g.n();
    for v in 0..n {
        let comps = components_after_removal(g, g.star(v));
        let all_comps = comps.iter().fold(VertexSet::EMPTY, |a, &c| a.union(c));
        for &c in &comps {
            let pc = partial_conjugation(g, dd, v, c).expect("component support");
            for x in 0..n {
                for y in dd.above[x].without(x) {
                    let r = transvection(g, dd, x, y).expect("x <= y");
                    if v != x {
                        check_v_ne_x(g, dd, &mut report, v, c, all_comps, &pc, x, y, &r);
                    } else {
                        check_v_eq_x(g, dd, &mut report, c, all_comps, x, y, &r);
                    }
                }
            }
        }
    }
    report
}

#[allow(clippy::too_many_arguments)]
fn check_v_ne_x(
    g: &SimplicialGraph,
    dd: &DominationData,
    report: &mut RelationReport,
    v: usize,
    c: VertexSet,
    all_comps: VertexSet,
    pc: &Automorphism,
    x: usize,
    y: usize,
    r: &Automorphism,
) {
    let sil = is_sil(g, v, y, x);
    let near = c.union(g.star(v));
    let commute_case = !sil || (!c.contains(x) && !c.contains(y)) || (near.contains(x) && near.contains(y));
    for eps in [1i8, -1] {
        let lhs = conjugate(g, &pc.pow(g, eps as i32), r);
        if commute_case {
            report.checked[0] += 1;
            if equal_in_out_by_powers(g, &lhs, r, v, POWER_BOUND).is_none() {
                report.violations.push(RelationViolation {
                    case: RelationCase::Commute,
                    v,
                    component: c,
                    x,
                    y,
                    sign: eps,
                    detail: "partial conjugation and transvection do not commute".into(),
                });
            }
            continue;
        }
        report.checked[1] += 1;
        // A SIL (v, y | x) forces x <= v.
        let Ok(rvx) = transvection(g, dd, x, v) else {
            report.violations.push(RelationViolation {
                case: RelationCase::SilConjugate,
                v,
                component: c,
                x,
                y,
                sign: eps,
                detail: "x is not dominated by v".into(),
            });
            continue;
        };
        // With x in C, pass to the complementary support, which flips the
        // sign of the exponent.
        let s = if c.contains(y) {
            eps as i32
        } else {
            report.normalized_sign_flips += 1;
            let comp_pc = partial_conjugation(g, dd, v, all_comps.difference(c)).expect("complement support");
            let lhs_n = conjugate(g, &comp_pc.pow(g, -(eps as i32)), r);
            if !equal_in_aut(g, &lhs_n, &compose_all(g, &[&rvx.pow(g, eps as i32), r, &rvx.pow(g, -(eps as i32))])) {
                report.violations.push(RelationViolation {
                    case: RelationCase::SilConjugate,
                    v,
                    component: c,
                    x,
                    y,
                    sign: eps,
                    detail: "normalized conjugation identity fails in Aut".into(),
                });
            }
            -(eps as i32)
        };
        let rhs = compose_all(g, &[&rvx.pow(g, -s), r, &rvx.pow(g, s)]);
        if equal_in_out_by_powers(g, &lhs, &rhs, v, POWER_BOUND).is_none() {
            report.violations.push(RelationViolation {
                case: RelationCase::SilConjugate,
                v,
                component: c,
                x,
                y,
                sign: eps,
                detail: "conjugate is not the transvection conjugate".into(),
            });
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn check_v_eq_x(
    g: &SimplicialGraph,
    dd: &DominationData,
    report: &mut RelationReport,
    c: VertexSet,
    all_comps: VertexSet,
    x: usize,
    y: usize,
    r: &Automorphism,
) {
    let support = if c.contains(y) { all_comps.difference(c) } else { c };
    let c_prime = support.difference(g.star(y));
    for delta in [1i32, -1] {
        report.checked[2] += 1;
        let pc = partial_conjugation(g, dd, x, support).expect("union of x-components");
        let Ok(pcy) = partial_conjugation(g, dd, y, c_prime) else {
            report.violations.push(RelationViolation {
                case: RelationCase::DominatingMultiplier,
                v: x,
                component: c,
                x,
                y,
                sign: delta as i8,
                detail: "C \\ st(y) is not a union of y-components".into(),
            });
            continue;
        };
        let lhs = conjugate(g, &r.pow(g, delta), &pc);
        let rhs = compose(g, &pc, &pcy.pow(g, delta));
        if !equal_in_aut(g, &lhs, &rhs) {
            report.violations.push(RelationViolation {
                case: RelationCase::DominatingMultiplier,
                v: x,
                component: c,
                x,
                y,
                sign: delta as i8,
                detail: "conjugated partial conjugation differs".into(),
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_core::domination_data;

    #[test]
    fn reduction_examples() {
        let edge = SimplicialGraph::path(&["a", "b"]);
        assert!(reduce(&edge, &Word::from_pairs(&[(0, 1), (0, -1)])).is_empty());
        assert_eq!(reduce(&edge, &Word::from_pairs(&[(0, 1), (1, 1), (0, -1)])), Word::gen(1));
        let free = SimplicialGraph::edgeless(2);
        let w = Word::from_pairs(&[(0, 1), (1, 1), (0, -1)]);
        assert_eq!(reduce(&free, &w), w);
    }

    #[test]
    fn equality_examples() {
        let edge = SimplicialGraph::path(&["a", "b"]);
        let ab = Word::from_pairs(&[(0, 1), (1, 1)]);
        let ba = Word::from_pairs(&[(1, 1), (0, 1)]);
        assert!(equal_in_raag(&edge, &ab, &ba));
        assert!(!equal_in_raag(&SimplicialGraph::edgeless(2), &ab, &ba));
        let g = SimplicialGraph::edgeless(3);
        let (x, v, w) = (0, 1, 2);
        let lhs = Word::from_pairs(&[(x, 1), (v, 1), (x, -1), (x, 1), (w, 1), (x, -1)]);
        let rhs = Word::from_pairs(&[(x, 1), (v, 1), (w, 1), (x, -1)]);
        assert!(equal_in_raag(&g, &lhs, &rhs));
    }

    #[test]
    fn generator_validation() {
        let g = SimplicialGraph::path(&["a", "b", "c", "d"]);
        let dd = domination_data(&g);
        assert!(transvection(&g, &dd, 0, 1).is_ok());
        assert!(transvection(&g, &dd, 1, 0).is_err());
        let b = 1;
        let d = VertexSet::singleton(3);
        let pc = partial_conjugation(&g, &dd, b, d).unwrap();
        assert_eq!(pc.images[3], Word::from_pairs(&[(1, -1), (3, 1), (1, 1)]));
        assert_eq!(pc.images[0], Word::gen(0));
        assert!(partial_conjugation(&g, &dd, b, VertexSet::singleton(2)).is_err());
        let inv = make_generator(&g, &dd, AutKind::Inversion(2)).unwrap();
        assert_eq!(inv.images[2], Word::gen_inv(2));
        let flip = make_generator(&g, &dd, AutKind::GraphSymmetry(vec![3, 2, 1, 0])).unwrap();
        assert_eq!(flip.images[0], Word::gen(3));
        assert!(make_generator(&g, &dd, AutKind::GraphSymmetry(vec![1, 0, 2, 3])).is_err());
        assert!(partial_conjugation(&g, &dd, b, VertexSet::EMPTY).is_ok());
    }

    #[test]
    fn composition_examples() {
        let g = SimplicialGraph::path(&["u", "v"]);
        let dd = domination_data(&g);
        let r = transvection(&g, &dd, 0, 1).unwrap();
        let rr = compose(&g, &r, &r);
        assert_eq!(rr.images[0], Word::from_pairs(&[(0, 1), (1, 1), (1, 1)]));
        assert!(equal_in_aut(&g, &compose(&g, &r, &r.inverse()), &Automorphism::identity(&g)));
    }

    #[test]
    fn inner_by_full_partial_conjugation() {
        let g = SimplicialGraph::edgeless(3);
        let dd = domination_data(&g);
        let all = VertexSet::full(3).without(0);
        let pc = partial_conjugation(&g, &dd, 0, all).unwrap();
        let id = Automorphism::identity(&g);
        assert!(equal_in_out_with_witness(&g, &pc, &id, &Word::gen(0)));
        assert!(!equal_in_aut(&g, &pc, &id));
    }

    #[test]
    fn sil_relation_on_three_isolated_vertices() {
        let g = SimplicialGraph::edgeless(3);
        let dd = domination_data(&g);
        let (v, y, x) = (0, 1, 2);
        let pc = partial_conjugation(&g, &dd, v, VertexSet::singleton(y)).unwrap();
        let r = transvection(&g, &dd, x, y).unwrap();
        let rvx = transvection(&g, &dd, x, v).unwrap();
        let lhs = conjugate(&g, &pc, &r);
        let rhs = compose_all(&g, &[&rvx.inverse(), &r, &rvx]);
        assert!(equal_in_aut(&g, &lhs, &rhs));
    }

    #[test]
    fn relation_suite_on_small_examples() {
        for g in [SimplicialGraph::path(&["a", "b", "c", "d"]), SimplicialGraph::edgeless(3)] {
            let dd = domination_data(&g);
            let rep = verify_pc_transvection_relations(&g, &dd);
            assert!(rep.violations.is_empty(), "{:?}", rep.violations);
        }
    }
}
