//! Delta vectors over x-components, exact all-ones span membership, and the
//! conditions (A1), (A2) and (A2').

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph_core::{components_after_removal, x_components, DominationData, SimplicialGraph};
use crate::linalg::{self, IntVec};
use crate::vset::VertexSet;

/// One vector `w_D` from a source vertex `y` and a `y`-component `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaVector {
    pub source: usize,
    pub component: VertexSet,
    /// Entries in `{0, 1}` over the basis components.
    pub w: Vec<u8>,
    /// Whether `D` contained the excluded component and `w` was complemented.
    pub complemented: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaSystem {
    pub base: VertexSet,
    pub x: usize,
    pub excluded: VertexSet,
    pub basis: Vec<VertexSet>,
    pub vectors: Vec<DeltaVector>,
}

impl DeltaSystem {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Distinct vectors in first-seen order.
    pub fn distinct_vectors(&self) -> Vec<Vec<u8>> {
        let mut out: Vec<Vec<u8>> = Vec::new();
        for v in &self.vectors {
            if !out.contains(&v.w) {
                out.push(v.w.clone());
            }
        }
        out
    }

    pub fn int_vectors(&self) -> Vec<IntVec> {
        self.distinct_vectors()
            .iter()
            .map(|w| w.iter().map(|&b| BigInt::from(b)).collect())
            .collect()
    }
}

/// Which vertices feed a delta system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sources {
    /// `y <= x` with `y` outside the class of `x`.
    StrictlyDominated,
    /// `y <= x` with `y != x`.
    Dominated,
}

/// Delta vectors for the `x`-component `c0` with sources strictly below the
/// class of `x`.
pub fn delta_system(g: &SimplicialGraph, dd: &DominationData, x: usize, c0: VertexSet) -> Result<DeltaSystem> {
    delta_system_with(g, dd, x, c0, Sources::StrictlyDominated)
}

pub fn delta_system_with(
    g: &SimplicialGraph,
    dd: &DominationData,
    x: usize,
    c0: VertexSet,
    sources: Sources,
) -> Result<DeltaSystem> {
    let ci = x_components(g, x)?;
    let Some(pos) = ci.position(c0) else {
        return Err(Error::NotAComponent(c0.to_vec(), g.name(x).to_string()));
    };
    let basis: Vec<VertexSet> = ci
        .components
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != pos)
        .map(|(_, &c)| c)
        .collect();
    let ys = match sources {
        Sources::StrictlyDominated => dd.strictly_below_class(x),
        Sources::Dominated => dd.below[x].without(x),
    };
    let mut vectors = Vec::new();
    for y in ys {
        for d in components_after_removal(g, g.star(y)) {
            let complemented = c0.is_subset(d);
            let w = basis
                .iter()
                .map(|c| (c.is_subset(d) != complemented) as u8)
                .collect();
            vectors.push(DeltaVector {
                source: y,
                component: d,
                w,
                complemented,
            });
        }
    }
    Ok(DeltaSystem {
        base: dd.class(x),
        x,
        excluded: c0,
        basis,
        vectors,
    })
}

/// Exact certificate for membership of the all-ones vector in the rational
/// span of a delta system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanCertificate {
    pub member: bool,
    /// Coefficients over the distinct vectors, in first-seen order.
    pub coefficients: Vec<BigRational>,
    /// Primitive integer functional vanishing on every vector and pairing
    /// nontrivially with all-ones.
    pub separating_functional: Vec<BigInt>,
    /// Least positive `n` with `n * (1,..,1)` in the integer span.
    pub minimal_power: Option<BigInt>,
    pub vectors: Vec<IntVec>,
    pub dim: usize,
}

impl SpanCertificate {
    /// Re-checks the certificate by exact arithmetic.
    pub fn verify(&self) -> bool {
        let ones = vec![BigInt::one(); self.dim];
        if self.member {
            let mut sum = vec![BigRational::zero(); self.dim];
            for (c, v) in self.coefficients.iter().zip(&self.vectors) {
                for (s, x) in sum.iter_mut().zip(v) {
                    *s += c * BigRational::from_integer(x.clone());
                }
            }
            let ok = sum.iter().all(|s| s.is_one()) && self.coefficients.len() == self.vectors.len();
            let n_ok = match &self.minimal_power {
                Some(n) => n >= &BigInt::one(),
                None => false,
            };
            ok && n_ok
        } else {
            let f = &self.separating_functional;
            f.len() == self.dim
                && self.vectors.iter().all(|v| linalg::dot(f, v).is_zero())
                && !linalg::dot(f, &ones).is_zero()
        }
    }
}

pub fn span_all_ones(ds: &DeltaSystem) -> SpanCertificate {
    span_all_ones_of(&ds.int_vectors(), ds.dim())
}

pub fn span_all_ones_of(vectors: &[IntVec], dim: usize) -> SpanCertificate {
    let ones = vec![BigInt::one(); dim];
    if dim == 0 {
        return SpanCertificate {
            member: true,
            coefficients: vec![BigRational::zero(); vectors.len()],
            separating_functional: Vec::new(),
            minimal_power: Some(BigInt::one()),
            vectors: vectors.to_vec(),
            dim,
        };
    }
    match linalg::solve_combination(vectors, &ones) {
        Some(c) => SpanCertificate {
            member: true,
            coefficients: c,
            separating_functional: Vec::new(),
            minimal_power: linalg::minimal_lattice_multiple(vectors, &ones),
            vectors: vectors.to_vec(),
            dim,
        },
        None => {
            let f = linalg::nullspace(vectors, dim)
                .into_iter()
                .find(|f| !linalg::dot(f, &ones).is_zero())
                .expect("all-ones outside the span has a separating functional");
            SpanCertificate {
                member: false,
                coefficients: Vec::new(),
                separating_functional: f,
                minimal_power: None,
                vectors: vectors.to_vec(),
                dim,
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct PrincipalityReport {
    pub class: VertexSet,
    pub component: VertexSet,
    pub principal: bool,
    /// Certificate of the first `x` witnessing principality, or of the
    /// first `x` when the pair is non-principal.
    pub certificate: SpanCertificate,
    pub per_x: Vec<(usize, DeltaSystem, SpanCertificate)>,
}

/// Components of the complement of `st(X)`.
pub fn class_components(g: &SimplicialGraph, class: VertexSet) -> Vec<VertexSet> {
    components_after_removal(g, g.star_of_set(class))
}

/// Whether `c` is a component of the complement of the star of some vertex
/// of `class`.
pub fn is_class_component(g: &SimplicialGraph, class: VertexSet, c: VertexSet) -> bool {
    class
        .iter()
        .any(|x| components_after_removal(g, g.star(x)).contains(&c))
}

/// `(X, C)` is non-principal exactly when the all-ones vector is in the span
/// for every `x` in `X` having `C` as an `x`-component.
pub fn is_principal(g: &SimplicialGraph, dd: &DominationData, class: VertexSet, c: VertexSet) -> Result<PrincipalityReport> {
    let mut per_x = Vec::new();
    for x in class {
        let ci = x_components(g, x)?;
        if ci.position(c).is_none() {
            continue;
        }
        let ds = delta_system(g, dd, x, c)?;
        let cert = span_all_ones(&ds);
        per_x.push((x, ds, cert));
    }
    if per_x.is_empty() {
        let name = class.first().map(|v| g.name(v).to_string()).unwrap_or_default();
        return Err(Error::NotAComponent(c.to_vec(), name));
    }
    let principal = per_x.iter().any(|(_, _, cert)| !cert.member);
    let certificate = per_x
        .iter()
        .find(|(_, _, cert)| !cert.member)
        .unwrap_or(&per_x[0])
        .2
        .clone();
    Ok(PrincipalityReport {
        class,
        component: c,
        principal,
        certificate,
        per_x,
    })
}

/// All `(X, C)` with `X` a class and `C` an `x`-component for some `x ∈ X`,
/// in class order then component order.
pub fn class_component_pairs(g: &SimplicialGraph, dd: &DominationData) -> Vec<(VertexSet, VertexSet)> {
    let mut out = Vec::new();
    for &class in &dd.classes {
        let mut seen: Vec<VertexSet> = Vec::new();
        for x in class {
            for c in components_after_removal(g, g.star(x)) {
                if !seen.contains(&c) {
                    seen.push(c);
                }
            }
        }
        seen.sort();
        for c in seen {
            out.push((class, c));
        }
    }
    out
}

pub fn virtually_obtained_from_dominated(
    g: &SimplicialGraph,
    dd: &DominationData,
    x: usize,
    c: VertexSet,
) -> Result<SpanCertificate> {
    let ds = delta_system_with(g, dd, x, c, Sources::Dominated)?;
    Ok(span_all_ones(&ds))
}

/// (A1): whenever `u != v` and `u <= v` there is a third `w` with
/// `u <= w <= v`.
pub fn condition_a1(g: &SimplicialGraph, dd: &DominationData) -> (bool, Option<(usize, usize)>) {
    for u in 0..g.n() {
        for v in dd.above[u].without(u) {
            let between = dd.above[u].intersection(dd.below[v]).without(u).without(v);
            if between.is_empty() {
                return (false, Some((u, v)));
            }
        }
    }
    (true, None)
}

/// (A2): whenever the complement of `st(v)` is disconnected some `u != v`
/// has `u <= v`.
pub fn condition_a2(g: &SimplicialGraph, dd: &DominationData) -> (bool, Option<usize>) {
    for v in 0..g.n() {
        let comps = components_after_removal(g, g.star(v));
        if comps.len() >= 2 && dd.below[v].without(v).is_empty() {
            return (false, Some(v));
        }
    }
    (true, None)
}

/// (A2'): every principal pair has a class of size at least two.
pub fn condition_a2_prime(g: &SimplicialGraph, dd: &DominationData) -> (bool, Option<(VertexSet, VertexSet)>) {
    for (class, c) in class_component_pairs(g, dd) {
        if class.len() != 1 {
            continue;
        }
        let rep = is_principal(g, dd, class, c).expect("pair enumerated from components");
        if rep.principal {
            return (false, Some((class, c)));
        }
    }
    (true, None)
}

/// Principal pairs in enumeration order.
pub fn principal_pairs(g: &SimplicialGraph, dd: &DominationData) -> Vec<(VertexSet, VertexSet)> {
    class_component_pairs(g, dd)
        .into_iter()
        .filter(|&(x, c)| is_principal(g, dd, x, c).map(|r| r.principal).unwrap_or(false))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_core::domination_data;
    use crate::linalg::int_rows;

    fn cert(rows: &[Vec<i64>], dim: usize) -> SpanCertificate {
        span_all_ones_of(&int_rows(rows), dim)
    }

    #[test]
    fn span_examples() {
        let c = cert(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]], 3);
        assert!(c.member && c.verify());
        assert_eq!(c.minimal_power, Some(BigInt::from(2)));
        let c = cert(&[vec![1, 1, 0], vec![0, 1, 1]], 3);
        assert!(!c.member && c.verify());
        assert_eq!(c.separating_functional, linalg::ints(&[1, -1, 1]));
        let c = cert(&[], 2);
        assert!(!c.member && c.verify());
        let c = cert(&[], 0);
        assert!(c.member && c.verify());
    }

    #[test]
    fn conditions_on_small_graphs() {
        let k2 = SimplicialGraph::complete(2);
        assert_eq!(condition_a1(&k2, &domination_data(&k2)), (false, Some((0, 1))));
        let k3 = SimplicialGraph::complete(3);
        assert!(condition_a1(&k3, &domination_data(&k3)).0);
        let p = SimplicialGraph::cycle(&["1", "2", "3", "4", "5"]);
        assert!(condition_a1(&p, &domination_data(&p)).0);

        let g = SimplicialGraph::from_named(&["a", "b", "c", "d", "v"], &[("a", "b"), ("c", "d")]).unwrap();
        let dd = domination_data(&g);
        let (ok, w) = condition_a2(&g, &dd);
        assert!(!ok);
        assert_eq!(w, Some(4));

        let star = SimplicialGraph::from_named(&["v", "a", "b", "c"], &[("v", "a"), ("v", "b"), ("v", "c")]).unwrap();
        assert!(condition_a2(&star, &domination_data(&star)).0);
        let p3 = SimplicialGraph::path(&["a", "b", "c"]);
        assert!(condition_a2(&p3, &domination_data(&p3)).0);
    }

    #[test]
    fn single_component_is_non_principal() {
        let g = SimplicialGraph::path(&["a", "b", "c", "d"]);
        let dd = domination_data(&g);
        let b = g.index_of("b").unwrap();
        let d = VertexSet::singleton(g.index_of("d").unwrap());
        let r = is_principal(&g, &dd, dd.class(b), d).unwrap();
        assert!(!r.principal);
        assert!(virtually_obtained_from_dominated(&g, &dd, b, d).unwrap().member);
    }

    #[test]
    fn free_pair_component_is_obtained() {
        // x, x' free equivalent, with a third isolated vertex keeping two components.
        let g = SimplicialGraph::edgeless(2);
        let dd = domination_data(&g);
        let c = virtually_obtained_from_dominated(&g, &dd, 0, VertexSet::singleton(1)).unwrap();
        assert!(c.member);
        let g = SimplicialGraph::edgeless(3);
        let dd = domination_data(&g);
        let c = virtually_obtained_from_dominated(&g, &dd, 0, VertexSet::singleton(1)).unwrap();
        assert!(c.member && c.verify());
    }

    #[test]
    fn not_a_component_is_rejected() {
        let g = SimplicialGraph::path(&["a", "b", "c"]);
        let dd = domination_data(&g);
        assert!(delta_system(&g, &dd, 0, VertexSet::singleton(1)).is_err());
    }

    #[test]
    fn complete_graph_a2_prime_vacuous() {
        let k = SimplicialGraph::complete(4);
        assert!(condition_a2_prime(&k, &domination_data(&k)).0);
    }
}
