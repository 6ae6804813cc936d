//! The verdict engine: conditions, SILs and the fixed-priority rule table for
//! property (T), largeness and virtual indicability.

use std::fmt;

use serde::Serialize;

use crate::graph_core::{components_after_removal, domination_data, find_sils_with, DominationData, SilWitness, SimplicialGraph};
use crate::indicability_pipeline::{indicability_witness, IndicabilityWitness};
use crate::principality::{condition_a1, condition_a2, condition_a2_prime};
use crate::vset::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Rule {
    A1Fails,
    A2PrimeFails,
    SizeTwoClass,
    FreeClassOfSizeThree,
    SpecialSil,
    SilWithAbelianClasses,
    NoSilA1A2Prime,
    EdgelessAtLeastFour,
    Frontier,
}

impl Rule {
    pub const ALL: [Rule; 9] = [
        Rule::A1Fails,
        Rule::A2PrimeFails,
        Rule::SizeTwoClass,
        Rule::FreeClassOfSizeThree,
        Rule::SpecialSil,
        Rule::SilWithAbelianClasses,
        Rule::NoSilA1A2Prime,
        Rule::EdgelessAtLeastFour,
        Rule::Frontier,
    ];

    /// 1-based priority.
    pub fn number(self) -> usize {
        Rule::ALL.iter().position(|&r| r == self).unwrap() + 1
    }

    pub fn verdict(self) -> Verdict {
        match self {
            Rule::NoSilA1A2Prime | Rule::EdgelessAtLeastFour => Verdict::Yes,
            Rule::Frontier => Verdict::Unknown,
            _ => Verdict::No,
        }
    }

    /// The result the rule rests on.
    pub fn citation(self) -> &'static str {
        match self {
            Rule::A1Fails => "failure of (A1) gives a finite-index subgroup mapping onto Z",
            Rule::A2PrimeFails => "failure of (A2') gives a finite-index subgroup of Aut(A_Γ) mapping onto Z",
            Rule::SizeTwoClass => "an equivalence class of size two makes Out(A_Γ) large",
            Rule::FreeClassOfSizeThree => "a non-abelian equivalence class of size three makes Out(A_Γ) large",
            Rule::SpecialSil => "a special SIL makes Out(A_Γ) large",
            Rule::SilWithAbelianClasses => "with a SIL and all classes abelian, Out(A_Γ) is large",
            Rule::NoSilA1A2Prime => "with no SIL, (A1) and (A2') hold if and only if Out(A_Γ) has property (T)",
            Rule::EdgelessAtLeastFour => "Out(F_n) has property (T) for n >= 4",
            Rule::Frontier => "not decided by the known criteria",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule {}", self.number())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "YES",
            Verdict::No => "NO",
            Verdict::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyT {
    pub verdict: Verdict,
    pub rule: Rule,
    /// Instance-specific reason, naming vertices.
    pub reason: String,
    pub citation: &'static str,
    /// Rules after the first that also fire.
    pub corroborating: Vec<Rule>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionResult<W> {
    pub holds: bool,
    pub witness: Option<W>,
}

impl<W> From<(bool, Option<W>)> for ConditionResult<W> {
    fn from((holds, witness): (bool, Option<W>)) -> Self {
        ConditionResult { holds, witness }
    }
}

#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub n: usize,
    pub edges: usize,
    pub dd: DominationData,
    pub sils: Vec<SilWitness>,
    pub a1: ConditionResult<(usize, usize)>,
    pub a2: ConditionResult<usize>,
    pub a2prime: ConditionResult<(VertexSet, VertexSet)>,
    pub finite_out: bool,
    pub virtually_nilpotent: bool,
    /// `Some(true)` with a reason when a largeness criterion fires,
    /// `Some(false)` when property (T) holds, `None` otherwise.
    pub large: Option<(bool, String)>,
    pub virtually_indicable: Option<(bool, String)>,
    pub witness: Option<IndicabilityWitness>,
    /// Set when building the indicability witness failed.
    pub witness_error: Option<String>,
    pub property_t: PropertyT,
}

impl AnalysisReport {
    /// The report's self-consistency invariants.
    pub fn check_consistency(&self) -> Result<(), String> {
        let yes = self.property_t.verdict == Verdict::Yes;
        if yes && matches!(self.virtually_indicable, Some((true, _))) {
            return Err("property (T) and virtual indicability both set".into());
        }
        if yes && matches!(self.large, Some((true, _))) {
            return Err("property (T) and largeness both set".into());
        }
        if self.property_t.rule == Rule::NoSilA1A2Prime && !(self.sils.is_empty() && self.a1.holds && self.a2prime.holds) {
            return Err("rule 7 fired without its hypotheses".into());
        }
        if self.property_t.verdict == Verdict::No && self.property_t.rule.verdict() != Verdict::No {
            return Err("negative verdict from a positive rule".into());
        }
        Ok(())
    }
}

/// Whether some star separates the graph.
pub fn has_separating_star(g: &SimplicialGraph) -> bool {
    (0..g.n()).any(|v| components_after_removal(g, g.star(v)).len() >= 2)
}

/// Whether some `u != v` has `u <= v`.
pub fn has_domination(dd: &DominationData) -> bool {
    dd.above.iter().enumerate().any(|(u, a)| !a.without(u).is_empty())
}

/// Runs every condition and the rule table.
pub fn analyze(g: &SimplicialGraph) -> AnalysisReport {
    let dd = domination_data(g);
    let sils = find_sils_with(g, &dd);
    let a1: ConditionResult<_> = condition_a1(g, &dd).into();
    let a2: ConditionResult<_> = condition_a2(g, &dd).into();
    let a2prime: ConditionResult<_> = condition_a2_prime(g, &dd).into();
    let finite_out = !has_domination(&dd) && !has_separating_star(g);
    let virtually_nilpotent = sils.is_empty() && dd.classes.iter().all(|c| c.len() == 1);

    let name_set = |s: VertexSet| g.format_set(s);
    let class_of_size = |k: usize, free_only: bool| {
        dd.classes
            .iter()
            .zip(&dd.kinds)
            .find(|(c, &kind)| c.len() == k && (!free_only || kind == crate::ClassKind::Free))
            .map(|(&c, _)| c)
    };
    let size_two = class_of_size(2, false);
    let free_three = class_of_size(3, true);
    let special = sils.iter().find(|s| s.special);
    let edgeless_big = g.n() >= 4 && g.edge_count() == 0;

    let mut fired: Vec<(Rule, String)> = Vec::new();
    if let Some((u, v)) = a1.witness {
        fired.push((
            Rule::A1Fails,
            format!("`{}` <= `{}` with no vertex strictly between", g.name(u), g.name(v)),
        ));
    }
    if let Some((x, c)) = a2prime.witness {
        fired.push((
            Rule::A2PrimeFails,
            format!("({}, {}) is principal with a singleton class", name_set(x), name_set(c)),
        ));
    }
    if let Some(c) = size_two {
        fired.push((Rule::SizeTwoClass, format!("class {} has size two", name_set(c))));
    }
    if let Some(c) = free_three {
        fired.push((Rule::FreeClassOfSizeThree, format!("class {} is free of size three", name_set(c))));
    }
    if let Some(s) = special {
        fired.push((
            Rule::SpecialSil,
            format!("({}, {} | {}) is a special SIL", g.name(s.x), g.name(s.y), g.name(s.z)),
        ));
    }
    if let Some(s) = sils.first().filter(|_| dd.all_classes_abelian()) {
        fired.push((
            Rule::SilWithAbelianClasses,
            format!(
                "({}, {} | {}) is a SIL and every class is abelian",
                g.name(s.x),
                g.name(s.y),
                g.name(s.z)
            ),
        ));
    }
    if sils.is_empty() && a1.holds && a2prime.holds {
        let why = if finite_out {
            "finite outer automorphism group".to_string()
        } else {
            "no SIL, (A1) and (A2') hold".to_string()
        };
        fired.push((Rule::NoSilA1A2Prime, why));
    }
    if edgeless_big {
        fired.push((Rule::EdgelessAtLeastFour, format!("edgeless graph on {} vertices", g.n())));
    }
    fired.push((Rule::Frontier, "SIL present with free classes; no criterion applies".into()));

    let (rule, reason) = fired[0].clone();
    let property_t = PropertyT {
        verdict: rule.verdict(),
        rule,
        reason,
        citation: rule.citation(),
        corroborating: fired[1..]
            .iter()
            .map(|(r, _)| *r)
            .filter(|&r| r != Rule::Frontier && r.verdict() == rule.verdict())
            .collect(),
    };

    let largeness = fired.iter().find(|(r, _)| {
        matches!(
            r,
            Rule::SizeTwoClass | Rule::FreeClassOfSizeThree | Rule::SpecialSil | Rule::SilWithAbelianClasses
        )
    });
    let yes = property_t.verdict == Verdict::Yes;
    let large = match (largeness, yes) {
        (Some((r, why)), _) => Some((true, format!("{why} ({r})"))),
        (None, true) => Some((false, "property (T) holds".into())),
        (None, false) => None,
    };

    let (witness, witness_error) = if matches!(rule, Rule::A1Fails | Rule::A2PrimeFails) {
        match indicability_witness(g, &dd) {
            Ok(w) => (w, None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, None)
    };
    let virtually_indicable = if let Some(w) = &witness {
        Some((true, w.text.clone()))
    } else if matches!(rule, Rule::A1Fails | Rule::A2PrimeFails) {
        Some((true, property_t.reason.clone()))
    } else if let Some((true, why)) = &large {
        Some((true, format!("large: {why}")))
    } else if yes {
        Some((false, "property (T) holds".into()))
    } else {
        None
    };

    AnalysisReport {
        n: g.n(),
        edges: g.edge_count(),
        dd,
        sils,
        a1,
        a2,
        a2prime,
        finite_out,
        virtually_nilpotent,
        large,
        virtually_indicable,
        witness,
        witness_error,
        property_t,
    }
}
