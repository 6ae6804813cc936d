//! Witnesses for virtual indicability of `Out(A_Γ)` when (A1) or (A2')
//! fails. For (A2') the graph is cut down by projection and restriction maps
//! to a free product of free abelian groups, and partial conjugations by `x`
//! are pushed through the homological representation on the double cover.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph_core::{component_containing, components_after_removal, DominationData, SimplicialGraph};
use crate::homo_rep::{self, FreeProductShape, Vm1Coordinates};
use crate::linalg::{self, rat::RatMatrix, IntVec};
use crate::principality::{self, delta_system_with, span_all_ones_of, Sources};
use crate::vset::VertexSet;

/// A Laurent generator of `Out(A_Γ)` as seen by the restriction and
/// projection tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapGenerator {
    /// `R_u^v : u ↦ uv`.
    Transvection { u: usize, v: usize },
    PartialConjugation { w: usize, support: VertexSet },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapBullet {
    /// `R_u^v` with `u ∈ Λ` needs `v ∈ Λ`.
    RestrictionTransvection,
    /// `π^w_C` with `w ∉ Λ` needs `Λ ⊆ C ∪ st(w)` or `Λ ∩ C = ∅`.
    RestrictionPartialConjugation,
    /// `R_u^v` with `v ∈ Λ` needs `u ∈ Λ`.
    ProjectionTransvection,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapViolation {
    pub bullet: MapBullet,
    pub generator: MapGenerator,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MapReport {
    pub restriction: Vec<MapViolation>,
    pub projection: Vec<MapViolation>,
}

impl MapReport {
    pub fn restriction_ok(&self) -> bool {
        self.restriction.is_empty()
    }

    pub fn projection_ok(&self) -> bool {
        self.projection.is_empty()
    }
}

/// All transvections `R_u^v` (`u <= v`, `u != v`) and partial conjugations
/// `π^w_C` of `Γ`.
pub fn standard_generators(g: &SimplicialGraph, dd: &DominationData) -> Vec<MapGenerator> {
    let mut out = Vec::new();
    for u in 0..g.n() {
        for v in dd.above[u].without(u) {
            out.push(MapGenerator::Transvection { u, v });
        }
    }
    for w in 0..g.n() {
        for c in components_after_removal(g, g.star(w)) {
            out.push(MapGenerator::PartialConjugation { w, support: c });
        }
    }
    out
}

/// Runs the restriction and projection tests for `gens` against the
/// subgraph on `lambda`. Stars are taken in `g`.
pub fn validate_maps(g: &SimplicialGraph, gens: &[MapGenerator], lambda: VertexSet) -> MapReport {
    let mut rep = MapReport::default();
    for &gen in gens {
        match gen {
            MapGenerator::Transvection { u, v } => {
                if lambda.contains(u) && !lambda.contains(v) {
                    rep.restriction.push(MapViolation {
                        bullet: MapBullet::RestrictionTransvection,
                        generator: gen,
                    });
                }
                if lambda.contains(v) && !lambda.contains(u) {
                    rep.projection.push(MapViolation {
                        bullet: MapBullet::ProjectionTransvection,
                        generator: gen,
                    });
                }
            }
            MapGenerator::PartialConjugation { w, support } => {
                if lambda.contains(w) {
                    continue;
                }
                let inside = lambda.is_subset(support.union(g.star(w)));
                let outside = lambda.is_disjoint(support);
                if !inside && !outside {
                    rep.restriction.push(MapViolation {
                        bullet: MapBullet::RestrictionPartialConjugation,
                        generator: gen,
                    });
                }
            }
        }
    }
    rep
}

/// The decluttered graph built from a singleton class `{x}` and a principal
/// `x`-component `C_0`.
#[derive(Clone, Debug)]
pub struct Declutter {
    pub x: usize,
    /// `C_0..C_r`; `C_0` first, the rest in component order.
    pub components: Vec<VertexSet>,
    pub z: Vec<VertexSet>,
    /// Vertices of `lk(x)` dominated by `x`.
    pub y: VertexSet,
    /// `{u : u <= x, u != x}`.
    pub u: VertexSet,
    pub lambda_hat: VertexSet,
    /// `Z^{|Z_0|} * ... * Z^{|Z_r|} * Z^{|Y|+1}`.
    pub shape: FreeProductShape,
    /// `Z_i <= x`, which forces `Z_i = C_i` to be a single vertex.
    pub z_below_x: Vec<bool>,
}

impl Declutter {
    pub fn r(&self) -> usize {
        self.components.len() - 1
    }

    /// `Λ̂` with every `Z_i` and `Y ∪ {x}` made complete. Vertices outside
    /// `Λ̂` stay in the graph as isolated vertices so indices agree with `g`.
    pub fn abelianised(&self, g: &SimplicialGraph) -> SimplicialGraph {
        let mut edges: Vec<(usize, usize)> = g
            .edges()
            .into_iter()
            .filter(|&(a, b)| self.lambda_hat.contains(a) && self.lambda_hat.contains(b))
            .collect();
        let mut cliques: Vec<VertexSet> = self.z.clone();
        cliques.push(self.y.with(self.x));
        for c in cliques {
            let vs = c.to_vec();
            for (i, &a) in vs.iter().enumerate() {
                for &b in &vs[i + 1..] {
                    if !g.adjacent(a, b) {
                        edges.push((a, b));
                    }
                }
            }
        }
        SimplicialGraph::new(g.names().to_vec(), &edges).expect("edges come from a valid graph")
    }

    /// Index of the `Z_i` containing `v`.
    pub fn factor_of(&self, v: usize) -> Option<usize> {
        self.z.iter().position(|z| z.contains(v))
    }
}

/// Singleton classes `{x}` together with their principal `x`-components.
pub fn principal_singletons(g: &SimplicialGraph, dd: &DominationData) -> Result<Vec<(usize, Vec<VertexSet>)>> {
    let mut out = Vec::new();
    for x in 0..g.n() {
        if dd.class(x).len() != 1 {
            continue;
        }
        let mut comps = Vec::new();
        for c in components_after_removal(g, g.star(x)) {
            if principality::is_principal(g, dd, dd.class(x), c)?.principal {
                comps.push(c);
            }
        }
        if !comps.is_empty() {
            out.push((x, comps));
        }
    }
    Ok(out)
}

/// The least domination-minimal vertex among principal singletons, with its
/// least principal component.
pub fn choose_driver(g: &SimplicialGraph, dd: &DominationData) -> Result<Option<(usize, VertexSet)>> {
    let cands = principal_singletons(g, dd)?;
    let verts: VertexSet = cands.iter().map(|&(x, _)| x).collect();
    for (x, comps) in &cands {
        if dd.below[*x].without(*x).is_disjoint(verts) {
            return Ok(Some((*x, comps[0])));
        }
    }
    Ok(None)
}

fn check(name: &str, ok: bool, detail: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Invariant(format!("{name}: {}", detail())))
    }
}

pub fn declutter(g: &SimplicialGraph, dd: &DominationData, x: usize, c0: VertexSet) -> Result<Declutter> {
    declutter_with(g, dd, x, c0, true)
}

/// [`declutter`] with the minimality precondition optional, for running
/// single steps on graphs outside the standing hypotheses.
pub fn declutter_with(
    g: &SimplicialGraph,
    dd: &DominationData,
    x: usize,
    c0: VertexSet,
    require_minimal: bool,
) -> Result<Declutter> {
    g.check_vertex(x)?;
    if dd.class(x).len() != 1 {
        return Err(Error::Precondition(format!("class of `{}` has more than one vertex", g.name(x))));
    }
    let comps = components_after_removal(g, g.star(x));
    if !comps.contains(&c0) {
        return Err(Error::NotAComponent(c0.to_vec(), g.name(x).to_string()));
    }
    if !principality::is_principal(g, dd, dd.class(x), c0)?.principal {
        return Err(Error::Precondition(format!(
            "({}, {}) is not principal",
            g.name(x),
            g.format_set(c0)
        )));
    }
    if require_minimal {
        let others: VertexSet = principal_singletons(g, dd)?.into_iter().map(|(v, _)| v).collect();
        if let Some(v) = dd.below[x].without(x).intersection(others).first() {
            return Err(Error::Precondition(format!(
                "`{}` is not domination-minimal: `{}` is below it",
                g.name(x),
                g.name(v)
            )));
        }
    }
    let mut components = vec![c0];
    components.extend(comps.into_iter().filter(|&c| c != c0));
    let mut z = Vec::new();
    for &c in &components {
        if c.len() == 1 {
            z.push(c);
            continue;
        }
        let best = c
            .iter()
            .filter(|&v| dd.is_minimal_in(v, c))
            .map(|v| dd.class(v))
            .min()
            .expect("a finite set has minimal classes");
        check("class-inside-component", best.is_subset(c), || g.format_set(best))?;
        z.push(best);
    }
    let y = g.link(x).intersection(dd.below[x]);
    let u = dd.below[x].without(x);
    let mut lambda_hat = y.with(x);
    for zi in &z {
        lambda_hat = lambda_hat.union(*zi);
    }
    let shape = FreeProductShape::new(z.iter().map(|s| s.len()).collect(), y.len() + 1)?;
    let z_below_x = z.iter().map(|s| s.iter().all(|v| dd.leq(v, x))).collect();
    let d = Declutter {
        x,
        components,
        z,
        y,
        u,
        lambda_hat,
        shape,
        z_below_x,
    };
    for v in lambda_hat {
        check("domination-closed", dd.below[v].is_subset(lambda_hat), || {
            format!("something below `{}` is missing", g.name(v))
        })?;
    }
    let rep = validate_maps(g, &standard_generators(g, dd), lambda_hat);
    check("projection-to-declutter", rep.projection_ok(), || format!("{:?}", rep.projection))?;
    Ok(d)
}

/// Images in `Out(A_{Λ_0})` of the standard generators of `Γ`, trivial ones
/// dropped.
pub fn projected_generators(g: &SimplicialGraph, dd: &DominationData, d: &Declutter) -> Vec<MapGenerator> {
    let lh = d.lambda_hat;
    let mut out = Vec::new();
    for gen in standard_generators(g, dd) {
        match gen {
            MapGenerator::Transvection { u, v } => {
                if lh.contains(u) && lh.contains(v) {
                    out.push(gen);
                }
            }
            MapGenerator::PartialConjugation { w, support } => {
                let s = support.intersection(lh);
                if lh.contains(w) && !s.is_empty() {
                    let g2 = MapGenerator::PartialConjugation { w, support: s };
                    if !out.contains(&g2) {
                        out.push(g2);
                    }
                }
            }
        }
    }
    out
}

/// The concrete forms of the structural facts about `Z_i`, `Y` and `U` that
/// the reduction relies on. Requires (A1).
pub fn check_factor_structure(g: &SimplicialGraph, dd: &DominationData, d: &Declutter) -> Result<()> {
    let x = d.x;
    let r = d.r();
    for i in 0..=r {
        for j in 0..=r {
            if i == j {
                continue;
            }
            for zi in d.z[i] {
                for zj in d.z[j] {
                    if dd.leq(zi, zj) {
                        check("cross-component-domination", dd.leq(zi, x), || {
                            format!("`{}` <= `{}` but not <= x", g.name(zi), g.name(zj))
                        })?;
                        let comps = components_after_removal(g, g.star(zj));
                        check("cross-component-domination", comps.contains(&d.z[i]), || {
                            format!("{} is not a `{}`-component", g.format_set(d.z[i]), g.name(zj))
                        })?;
                    }
                }
            }
        }
    }
    // Classes that stay free after abelianising each Z_i.
    let lambda0 = d.abelianised(g);
    for &class in &dd.classes {
        let part = class.intersection(d.lambda_hat);
        if part.len() < 2 {
            continue;
        }
        let free_here = part.iter().all(|a| lambda0.link(a).is_disjoint(part));
        let free_there = class.iter().all(|a| g.link(a).is_disjoint(class));
        let predicted = free_there && class.iter().all(|a| dd.leq(a, x)) && class.is_disjoint(g.star(x));
        check("free-classes-after-abelianising", free_here == predicted, || g.format_set(class))?;
        let owners: Vec<usize> = part.iter().filter_map(|a| d.factor_of(a)).collect();
        let mut distinct = owners.clone();
        distinct.dedup();
        if distinct.len() > 1 {
            let covered: VertexSet = d.z.iter().fold(VertexSet::EMPTY, |a, b| a.union(*b));
            check(
                "free-classes-after-abelianising",
                predicted && class.is_subset(covered),
                || g.format_set(class),
            )?;
        }
    }
    let outside_star = d.u.difference(g.star(x));
    for zu in outside_star {
        for dcomp in components_after_removal(g, g.star(zu)) {
            check(
                "dominated-vertex-components",
                dcomp.contains(x) || d.components.contains(&dcomp),
                || format!("`{}`-component {}", g.name(zu), g.format_set(dcomp)),
            )?;
        }
    }
    let u_components: Vec<(usize, Vec<VertexSet>)> =
        d.u.iter().map(|u| (u, components_after_removal(g, g.star(u)))).collect();
    let is_u_component = |c: VertexSet| u_components.iter().any(|(_, cs)| cs.contains(&c));
    check("base-component-not-dominated-support", !is_u_component(d.components[0]), || {
        g.format_set(d.components[0])
    })?;
    check(
        "some-component-not-dominated-support",
        (1..=r).any(|i| !is_u_component(d.components[i])),
        || "every other component is a u-component".into(),
    )?;
    check("base-class-not-below-x", !d.z_below_x[0], || g.format_set(d.z[0]))?;
    for i in 1..=r {
        if d.z_below_x[i] {
            check("dominated-singletons-in-support-vectors", is_u_component(d.components[i]), || {
                g.format_set(d.z[i])
            })?;
        }
    }
    Ok(())
}

/// Whether `a ∪ b` avoids `st(u)` and lies in one component of its
/// complement.
fn same_u_component(g: &SimplicialGraph, u: usize, a: VertexSet, b: VertexSet) -> bool {
    let st = g.star(u);
    let ab = a.union(b);
    let Some(start) = ab.first() else { return true };
    if !ab.is_disjoint(st) {
        return false;
    }
    ab.is_subset(component_containing(g, g.vertices().difference(st), start))
}

/// `a` and `b` share a `u`-component for every `u ∈ U`.
pub fn same_components_for_all_u(g: &SimplicialGraph, d: &Declutter, a: VertexSet, b: VertexSet) -> bool {
    d.u.iter().all(|u| same_u_component(g, u, a, b))
}

/// `st(s)` separates `a` from `b`.
fn separates(g: &SimplicialGraph, s: VertexSet, a: VertexSet, b: VertexSet) -> bool {
    let st = g.star_of_set(s);
    if !a.is_disjoint(st) || !b.is_disjoint(st) || a.is_empty() || b.is_empty() {
        return false;
    }
    let comp = component_containing(g, g.vertices().difference(st), a.first().unwrap());
    !a.union(b).is_subset(comp)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    /// Some `Z_i`, not below `x`, shares a `u`-component with `Z_0` for
    /// every `u ∈ U`.
    Shared,
    /// Every such `Z_i` is separated from `Z_0` by some `st(u)`.
    Separated,
}

impl Case {
    pub fn tag(self) -> u8 {
        match self {
            Case::Shared => 1,
            Case::Separated => 2,
        }
    }
}

/// The case together with the indices `i > 0`, `Z_i` not below `x`, that
/// share every `u`-component with `Z_0`.
pub fn classify_case(g: &SimplicialGraph, dd: &DominationData, d: &Declutter) -> Result<(Case, Vec<usize>)> {
    let t: Vec<usize> = (1..=d.r())
        .filter(|&i| !d.z_below_x[i] && same_components_for_all_u(g, d, d.z[0], d.z[i]))
        .collect();
    let case = if t.is_empty() { Case::Separated } else { Case::Shared };
    for i in 0..=d.r() {
        if d.z[i].iter().any(|z| dd.leq(d.x, z)) {
            check("class-above-x-forces-shared-case", case == Case::Shared && (i == 0 || t.contains(&i)), || {
                g.format_set(d.z[i])
            })?;
        }
    }
    Ok((case, t))
}

#[derive(Clone, Debug)]
pub struct SharedReduction {
    pub t: Vec<usize>,
    pub lambda1: VertexSet,
    pub chosen: usize,
    pub lambda: VertexSet,
    pub shape: FreeProductShape,
    /// `st(Z_i)` separates `Z_0` from `x`, or `st(Z_0)` separates `Z_i` from
    /// `x`. Advisory only.
    pub largeness_trigger: bool,
}

pub fn reduce_shared(g: &SimplicialGraph, dd: &DominationData, d: &Declutter, t: &[usize]) -> Result<SharedReduction> {
    let chosen = *t.first().ok_or_else(|| Error::Precondition("not in the shared case".into()))?;
    let mut lambda1 = d.z[0].with(d.x);
    for &i in t {
        lambda1 = lambda1.union(d.z[i]);
    }
    let lambda0 = d.abelianised(g);
    let gens = projected_generators(g, dd, d);
    let rep = validate_maps(&lambda0, &gens, lambda1);
    check("restriction-to-shared-classes", rep.restriction_ok(), || format!("{:?}", rep.restriction))?;
    let lambda = d.z[0].union(d.z[chosen]).with(d.x);
    let restricted: Vec<MapGenerator> = gens
        .iter()
        .filter(|gen| match **gen {
            MapGenerator::Transvection { u, v } => lambda1.contains(u) && lambda1.contains(v),
            MapGenerator::PartialConjugation { .. } => false,
        })
        .copied()
        .collect();
    let rep = validate_maps(&lambda0, &restricted, lambda);
    check("projection-to-two-classes", rep.projection_ok(), || format!("{:?}", rep.projection))?;
    let xs = VertexSet::singleton(d.x);
    let largeness_trigger = t.iter().any(|&i| {
        separates(g, d.z[i], d.z[0], xs) || separates(g, d.z[0], d.z[i], xs)
    });
    Ok(SharedReduction {
        t: t.to_vec(),
        lambda1,
        chosen,
        lambda,
        shape: FreeProductShape::new(vec![d.z[0].len(), d.z[chosen].len()], 1)?,
        largeness_trigger,
    })
}

/// A partial conjugation `π^z_D` with `z ∈ Z_i` (`i > 0`), `z` not below
/// `x`, and `D` not a union of `u`-components for any `u ∈ U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadConjugation {
    pub multiplier: usize,
    pub factor: usize,
    pub support: VertexSet,
}

#[derive(Clone, Debug)]
pub struct SeparatedReduction {
    pub bad: Vec<BadConjugation>,
    /// `(deleted factor, surviving partner)` in deletion order.
    pub deletions: Vec<(usize, usize)>,
    /// Kept factor indices, `0` first.
    pub retained: Vec<usize>,
    pub shape: FreeProductShape,
}

fn is_union_of_u_components(g: &SimplicialGraph, u: usize, c: VertexSet) -> bool {
    let meeting: Vec<VertexSet> = components_after_removal(g, g.star(u))
        .into_iter()
        .filter(|e| !e.is_disjoint(c))
        .collect();
    meeting.iter().all(|e| e.is_subset(c)) && meeting.iter().fold(VertexSet::EMPTY, |a, e| a.union(*e)) == c
}

pub fn bad_conjugations(g: &SimplicialGraph, dd: &DominationData, d: &Declutter) -> Result<Vec<BadConjugation>> {
    let mut out = Vec::new();
    for i in 1..=d.r() {
        let others = d.lambda_hat.difference(d.z[i]);
        for z in d.z[i] {
            if dd.leq(z, d.x) {
                continue;
            }
            for c in components_after_removal(g, g.star(z)) {
                let image = c.intersection(d.lambda_hat);
                if image.is_empty() || image == others {
                    continue;
                }
                if d.u.iter().any(|u| is_union_of_u_components(g, u, c)) {
                    continue;
                }
                let shares = d.u.iter().all(|u| {
                    let st = g.star(u);
                    let rest = c.difference(st);
                    !rest.is_empty()
                        && !st.contains(z)
                        && rest.is_subset(component_containing(g, g.vertices().difference(st), z))
                });
                check("bad-support-position", shares || c.contains(d.x), || {
                    format!("π^{}_{}", g.name(z), g.format_set(c))
                })?;
                out.push(BadConjugation {
                    multiplier: z,
                    factor: i,
                    support: c,
                });
            }
        }
    }
    Ok(out)
}

pub fn reduce_separated(g: &SimplicialGraph, dd: &DominationData, d: &Declutter) -> Result<SeparatedReduction> {
    let bad = bad_conjugations(g, dd, d)?;
    let mut present = vec![true; d.r() + 1];
    let mut deletions = Vec::new();
    loop {
        let lambda_n = (0..=d.r())
            .filter(|&j| present[j])
            .fold(d.y.with(d.x), |a, j| a.union(d.z[j]));
        let live = bad.iter().find(|b| {
            let image = b.support.intersection(lambda_n);
            present[b.factor] && !image.is_empty() && image != lambda_n.difference(d.z[b.factor])
        });
        let Some(b) = live else { break };
        let i = b.factor;
        let image = b.support.intersection(lambda_n);
        let normalised = if image.contains(d.x) {
            lambda_n.difference(d.z[i]).difference(image)
        } else {
            image
        };
        let partner = (1..=d.r()).find(|&j| {
            j != i && present[j] && d.z[j].is_subset(normalised) && same_components_for_all_u(g, d, d.z[i], d.z[j])
        });
        let Some(j) = partner else {
            return Err(Error::Invariant(format!(
                "deleted-class-has-partner: no surviving partner for {}",
                g.format_set(d.z[i])
            )));
        };
        present[i] = false;
        deletions.push((i, j));
    }
    let retained: Vec<usize> = (0..=d.r()).filter(|&j| present[j]).collect();
    check("survivor-besides-base", retained.len() >= 2 && retained[0] == 0, || format!("{retained:?}"))?;
    for &(i, _) in &deletions {
        check(
            "deleted-class-tracked",
            retained[1..].iter().any(|&j| same_components_for_all_u(g, d, d.z[i], d.z[j])),
            || g.format_set(d.z[i]),
        )?;
    }
    let shape = FreeProductShape::new(retained.iter().map(|&j| d.z[j].len()).collect(), d.y.len() + 1)?;
    Ok(SeparatedReduction {
        bad,
        deletions,
        retained,
        shape,
    })
}

/// Vectors `w_D` from `u`-components over `C_1..C_r`, normalised so that
/// `C_0 ⊄ D`. Distinct, nonzero, first-seen order.
pub fn full_support_vectors(g: &SimplicialGraph, dd: &DominationData, d: &Declutter) -> Result<Vec<Vec<u8>>> {
    let ds = delta_system_with(g, dd, d.x, d.components[0], Sources::Dominated)?;
    check(
        "component-order",
        ds.basis.as_slice() == &d.components[1..],
        || "delta basis order differs".into(),
    )?;
    Ok(ds.distinct_vectors().into_iter().filter(|w| w.iter().any(|&b| b == 1)).collect())
}

/// `Π` over the retained coordinates `z_1..z_s` and an integer basis of
/// `Π^⊥`.
pub fn build_pi_perp(
    g: &SimplicialGraph,
    dd: &DominationData,
    d: &Declutter,
    retained: &[usize],
) -> Result<(Vec<Vec<i64>>, Vec<Vec<i64>>)> {
    let full = full_support_vectors(g, dd, d)?;
    let coords: Vec<usize> = retained.iter().filter(|&&j| j != 0).copied().collect();
    let mut pi: Vec<Vec<i64>> = Vec::new();
    for w in &full {
        let p: Vec<i64> = coords.iter().map(|&j| w[j - 1] as i64).collect();
        if p.iter().any(|&b| b != 0) && !pi.contains(&p) {
            pi.push(p);
        }
    }
    let s = coords.len();
    let rows = linalg::int_rows(&pi);
    let cert = span_all_ones_of(&rows, s);
    check("all-ones-outside-span", !cert.member, || format!("Π = {pi:?}"))?;
    let perp = linalg::nullspace(&rows, s)
        .iter()
        .map(|v| to_i64_vec(v))
        .collect::<Result<Vec<_>>>()?;
    Ok((pi, perp))
}

fn to_i64_vec(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| x.to_i64().ok_or_else(|| Error::Invariant("entry overflows i64".into())))
        .collect()
}

fn to_i64_matrix(m: &RatMatrix) -> Result<Vec<Vec<i64>>> {
    linalg::rat::to_i64(m).ok_or_else(|| Error::Invariant("matrix is not integral".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMatrix {
    /// Index `i` of `C_i` in the declutter.
    pub component: usize,
    /// Action on `V_{-1}` of the reduced group.
    pub full: Vec<Vec<i64>>,
    /// Action on `V` in the basis `Π^⊥` basis then `x`.
    pub restricted: Vec<Vec<i64>>,
    /// `v ↦ v + 2⟨v, mask⟩x` on `V`.
    pub mask: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct PipelineResult {
    pub case: Case,
    pub declutter: Declutter,
    pub shared: Option<SharedReduction>,
    pub separated: Option<SeparatedReduction>,
    /// Kept factor indices into `declutter.z`, `0` first.
    pub retained: Vec<usize>,
    pub shape: FreeProductShape,
    pub pi: Vec<Vec<i64>>,
    pub perp_basis: Vec<Vec<i64>>,
    pub generator_matrices: Vec<GeneratorMatrix>,
    pub abelian_rank: usize,
    /// Shared case: `π^x_{C_0}` has infinite order in `PGL(2)`.
    pub infinite_order: Option<bool>,
    /// Multipliers in `U` map `V` into itself, by the chain-level action.
    /// Advisory: failures are listed, not fatal.
    pub u_multipliers_preserve_v: bool,
    pub u_multiplier_failures: Vec<String>,
}

/// Generator index in `shape` for a vertex of the reduced graph.
fn shape_generator(d: &Declutter, retained: &[usize], shape: &FreeProductShape, v: usize) -> Option<usize> {
    if v == d.x {
        return Some(shape.x());
    }
    if d.y.contains(v) {
        let pos = d.y.iter().position(|w| w == v)?;
        return Some(shape.y(pos + 1));
    }
    let f = d.factor_of(v)?;
    let k = retained.iter().position(|&j| j == f)?;
    let pos = d.z[f].iter().position(|w| w == v)?;
    Some(shape.factor_start(k) + pos)
}

/// Factor indices of `shape` whose vertices lie in `c`; `None` if some
/// factor is split.
fn shape_support(d: &Declutter, retained: &[usize], shape: &FreeProductShape, c: VertexSet) -> Option<Vec<usize>> {
    let mut out = Vec::new();
    for (k, &j) in retained.iter().enumerate() {
        let zin = d.z[j].intersection(c);
        if zin == d.z[j] {
            out.push(k);
        } else if !zin.is_empty() {
            return None;
        }
    }
    if c.contains(d.x) {
        out.push(shape.y_factor());
    }
    Some(out)
}

/// `M` maps the span of `basis` into itself; returns coordinates.
fn restrict(m: &RatMatrix, basis: &[IntVec]) -> Option<RatMatrix> {
    let k = basis.len();
    let mut out = vec![Vec::new(); k];
    for b in basis {
        let image: Vec<num_rational::BigRational> =
            m.iter().map(|row| linalg::dot_rat(row, b)).collect();
        let denom = image.iter().fold(BigInt::one(), |l, x| num_integer::lcm(l, x.denom().clone()));
        let scaled: IntVec = image
            .iter()
            .map(|x| (x * num_rational::BigRational::from_integer(denom.clone())).to_integer())
            .collect();
        let c = linalg::solve_combination(basis, &scaled)?;
        for (i, ci) in c.into_iter().enumerate() {
            out[i].push(ci / num_rational::BigRational::from_integer(denom.clone()));
        }
    }
    Some(out)
}

/// Whether an integer matrix with determinant `±1` has infinite order in
/// `PGL(2, Q)`.
pub fn infinite_order_pgl2(m: &[Vec<i64>]) -> bool {
    let mul = |a: &[Vec<i64>], b: &[Vec<i64>]| -> Vec<Vec<i64>> {
        (0..2)
            .map(|i| (0..2).map(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j]).collect())
            .collect()
    };
    let mut p = m.to_vec();
    // Finite orders in GL(2, Z) divide 4 or 6.
    for _ in 1..=12 {
        if p[0][1] == 0 && p[1][0] == 0 && p[0][0] == p[1][1] {
            return false;
        }
        p = mul(&p, m);
    }
    true
}

fn transvection_mask(r: &[Vec<i64>]) -> Option<Vec<i64>> {
    let n = r.len();
    let last = n - 1;
    let sign = if r[0][0] < 0 { -1 } else { 1 };
    let mut mask = Vec::new();
    for j in 0..n {
        for i in 0..last {
            if sign * r[i][j] != (i == j) as i64 {
                return None;
            }
        }
        let e = sign * r[last][j];
        if j == last {
            if e != 1 {
                return None;
            }
        } else {
            if e % 2 != 0 {
                return None;
            }
            mask.push(e / 2);
        }
    }
    Some(mask)
}

fn check_u_multipliers(
    g: &SimplicialGraph,
    d: &Declutter,
    retained: &[usize],
    shape: &FreeProductShape,
    basis: &[IntVec],
) -> Result<Vec<String>> {
    let coords = Vm1Coordinates::new(&homo_rep::build_cover_complex(shape))?;
    let lambda = retained.iter().fold(d.y.with(d.x), |a, &j| a.union(d.z[j]));
    let mut failures = Vec::new();
    for u in d.u.intersection(lambda) {
        let gen = shape_generator(d, retained, shape, u).expect("vertex of the reduced graph");
        let own = shape.factor_of(gen);
        for c in components_after_removal(g, g.star(u)) {
            let Some(mut sup) = shape_support(d, retained, shape, c) else {
                failures.push(format!("π^{}_{} splits a factor", g.name(u), g.format_set(c)));
                continue;
            };
            sup.retain(|&f| f != own);
            if sup.is_empty() {
                continue;
            }
            let m = homo_rep::rho_pi_chain(&coords, gen, &sup)?;
            if restrict(&m, basis).is_none() {
                failures.push(format!("π^{}_{} moves V", g.name(u), g.format_set(c)));
            }
        }
    }
    Ok(failures)
}

/// Restricts the actions of `π^x_{C_i}` (kept `i`) to
/// `V = span(Π^⊥ ∪ {x})`.
pub fn final_representation(
    g: &SimplicialGraph,
    d: &Declutter,
    retained: &[usize],
    shape: &FreeProductShape,
    perp: &[Vec<i64>],
) -> Result<(Vec<GeneratorMatrix>, usize, Vec<String>)> {
    let dim = shape.vm1_dim();
    let s = shape.s();
    let mut basis: Vec<IntVec> = perp
        .iter()
        .map(|p| {
            let mut v = vec![BigInt::zero(); dim];
            for (i, &e) in p.iter().enumerate() {
                v[i] = BigInt::from(e);
            }
            v
        })
        .collect();
    let mut xv = vec![BigInt::zero(); dim];
    xv[dim - 1] = BigInt::one();
    basis.push(xv);
    check("perp-dimension", perp.iter().all(|p| p.len() == s), || format!("{perp:?}"))?;
    let mut gens = Vec::new();
    for (k, &j) in retained.iter().enumerate() {
        let m = homo_rep::rho_pi_pc(shape, shape.x(), &[k])?;
        let r = restrict(&m, &basis).ok_or_else(|| {
            Error::Invariant(format!("x-multiplier on {} does not preserve V", g.format_set(d.components[j])))
        })?;
        let restricted = to_i64_matrix(&r)?;
        let mask = transvection_mask(&restricted).ok_or_else(|| {
            Error::Invariant(format!("restricted action {restricted:?} is not a transvection"))
        })?;
        gens.push(GeneratorMatrix {
            component: j,
            full: to_i64_matrix(&m)?,
            restricted,
            mask,
        });
    }
    for a in &gens {
        for b in &gens {
            let ma = linalg::rat::from_i64(&a.restricted);
            let mb = linalg::rat::from_i64(&b.restricted);
            check("restricted-actions-commute", linalg::rat::mul(&ma, &mb) == linalg::rat::mul(&mb, &ma), || {
                format!("C_{} and C_{}", a.component, b.component)
            })?;
        }
    }
    let masks: Vec<IntVec> = gens.iter().map(|gm| linalg::ints(&gm.mask)).collect();
    let rank = linalg::rank(&masks, perp.len());
    let failures = check_u_multipliers(g, d, retained, shape, &basis)?;
    Ok((gens, rank, failures))
}

/// The full construction from a principal singleton `x` and its
/// component `C_0`. Requires (A1).
pub fn run_pipeline(g: &SimplicialGraph, dd: &DominationData, x: usize, c0: VertexSet) -> Result<PipelineResult> {
    let (a1, _) = principality::condition_a1(g, dd);
    if !a1 {
        return Err(Error::Precondition("(A1) fails".into()));
    }
    let d = declutter(g, dd, x, c0)?;
    check_factor_structure(g, dd, &d)?;
    let (case, t) = classify_case(g, dd, &d)?;
    match case {
        Case::Shared => {
            let red = reduce_shared(g, dd, &d, &t)?;
            let retained = vec![0, red.chosen];
            let shape = red.shape.clone();
            let perp = vec![vec![1]];
            let (gens, rank, failures) = final_representation(g, &d, &retained, &shape, &perp)?;
            let infinite = infinite_order_pgl2(&gens[0].full);
            check("base-conjugation-infinite-order", infinite, || format!("{:?}", gens[0].full))?;
            Ok(PipelineResult {
                case,
                declutter: d,
                shared: Some(red),
                separated: None,
                retained,
                shape,
                pi: Vec::new(),
                perp_basis: perp,
                generator_matrices: gens,
                abelian_rank: rank,
                infinite_order: Some(infinite),
                u_multipliers_preserve_v: failures.is_empty(),
                u_multiplier_failures: failures,
            })
        }
        Case::Separated => {
            let red = reduce_separated(g, dd, &d)?;
            let (pi, perp) = build_pi_perp(g, dd, &d, &red.retained)?;
            let retained = red.retained.clone();
            let shape = red.shape.clone();
            let (gens, rank, failures) = final_representation(g, &d, &retained, &shape, &perp)?;
            check("abelian-rank", rank == perp.len() && rank >= 1, || format!("{rank} vs {}", perp.len()))?;
            Ok(PipelineResult {
                case,
                declutter: d,
                shared: None,
                separated: Some(red),
                retained,
                shape,
                pi,
                perp_basis: perp,
                generator_matrices: gens,
                abelian_rank: rank,
                infinite_order: None,
                u_multipliers_preserve_v: failures.is_empty(),
                u_multiplier_failures: failures,
            })
        }
    }
}

#[derive(Clone, Debug)]
pub enum WitnessReason {
    /// `u <= v`, `u != v`, with nothing strictly between.
    A1Failure { u: usize, v: usize },
    Pipeline(Box<PipelineResult>),
}

#[derive(Clone, Debug)]
pub struct IndicabilityWitness {
    pub reason: WitnessReason,
    pub text: String,
}

pub fn indicability_witness(g: &SimplicialGraph, dd: &DominationData) -> Result<Option<IndicabilityWitness>> {
    if let (false, Some((u, v))) = principality::condition_a1(g, dd) {
        let text = format!(
            "(A1) fails: `{}` <= `{}` with no third vertex between them; Out(A_Γ) virtually maps onto Z",
            g.name(u),
            g.name(v)
        );
        return Ok(Some(IndicabilityWitness {
            reason: WitnessReason::A1Failure { u, v },
            text,
        }));
    }
    let Some((x, c0)) = choose_driver(g, dd)? else {
        return Ok(None);
    };
    let res = run_pipeline(g, dd, x, c0)?;
    let text = match res.case {
        Case::Shared => format!(
            "(A2') fails at ({{{}}}, {}); reduced to {}; π^x_C0 acts on V_-1 with infinite order in PGL(2)",
            g.name(x),
            g.format_set(c0),
            res.shape
        ),
        Case::Separated => format!(
            "(A2') fails at ({{{}}}, {}); reduced to {}; partial conjugations by x act on V = Π^⊥ + Qx as a free abelian group of rank {}",
            g.name(x),
            g.format_set(c0),
            res.shape,
            res.abelian_rank
        ),
    };
    Ok(Some(IndicabilityWitness {
        reason: WitnessReason::Pipeline(Box::new(res)),
        text,
    }))
}
