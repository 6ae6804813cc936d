//! Human-readable and JSON renderings of analysis, representation and
//! relation reports. JSON objects use sorted keys, so equal inputs give
//! byte-identical output.

use outraag::decision::AnalysisReport;
use outraag::homo_rep::{
    build_cover_complex, homology_dims, rho_pi_chain, rho_pi_pc, supports_avoiding, FreeProductShape, Vm1Coordinates,
};
use outraag::indicability_pipeline::{PipelineResult, WitnessReason};
use outraag::linalg::rat::RatMatrix;
use outraag::principality::{class_component_pairs, is_principal, SpanCertificate};
use outraag::raag_words::RelationReport;
use outraag::standard_rep::SplittingReport;
use outraag::{ClassKind, SimplicialGraph, VertexSet};
use serde_json::{json, Value};

pub const SCHEMA: &str = "outraag.analysis";
pub const SCHEMA_VERSION: u32 = 1;

fn names(g: &SimplicialGraph, s: VertexSet) -> Value {
    json!(g.set_names(s))
}

fn kind_name(k: ClassKind) -> &'static str {
    match k {
        ClassKind::Singleton => "singleton",
        ClassKind::Abelian => "abelian",
        ClassKind::Free => "free",
    }
}

fn rat_matrix(m: &RatMatrix) -> Value {
    json!(m
        .iter()
        .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn certificate(c: &SpanCertificate) -> Value {
    json!({
        "member": c.member,
        "dim": c.dim,
        "vectors": c.vectors.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "coefficients": c.coefficients.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "separating_functional": c.separating_functional.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "minimal_power": c.minimal_power.as_ref().map(|p| p.to_string()),
    })
}

fn pipeline(g: &SimplicialGraph, p: &PipelineResult) -> Value {
    let d = &p.declutter;
    let mut v = json!({
        "case": p.case.tag(),
        "x": g.name(d.x),
        "components": d.components.iter().map(|&c| names(g, c)).collect::<Vec<_>>(),
        "z": d.z.iter().map(|&c| names(g, c)).collect::<Vec<_>>(),
        "y": names(g, d.y),
        "dominated_by_x": names(g, d.u),
        "decluttered_shape": d.shape.to_string(),
        "retained": p.retained,
        "shape": p.shape.to_string(),
        "pi": p.pi,
        "pi_perp": p.perp_basis,
        "generator_matrices": p.generator_matrices.iter().map(|m| json!({
            "component": m.component,
            "full": m.full,
            "restricted": m.restricted,
            "mask": m.mask,
        })).collect::<Vec<_>>(),
        "abelian_rank": p.abelian_rank,
        "infinite_order_pgl2": p.infinite_order,
        "u_multipliers_preserve_v": p.u_multipliers_preserve_v,
        "u_multiplier_failures": p.u_multiplier_failures,
    });
    if let Some(s) = &p.shared {
        v["shared"] = json!({
            "t": s.t,
            "chosen": s.chosen,
            "lambda": names(g, s.lambda),
            "largeness_trigger": s.largeness_trigger,
        });
    }
    if let Some(s) = &p.separated {
        v["separated"] = json!({
            "bad": s.bad.iter().map(|b| json!({
                "multiplier": g.name(b.multiplier),
                "factor": b.factor,
                "support": names(g, b.support),
            })).collect::<Vec<_>>(),
            "deletions": s.deletions,
        });
    }
    v
}

pub fn analysis_json(g: &SimplicialGraph, r: &AnalysisReport, certify: bool) -> Value {
    let dd = &r.dd;
    let pairs: Vec<Value> = (0..g.n())
        .flat_map(|u| dd.above[u].without(u).iter().map(move |v| (u, v)))
        .map(|(u, v)| json!([g.name(u), g.name(v)]))
        .collect();
    let opt = |o: &Option<(bool, String)>| match o {
        Some((b, why)) => json!({"value": b, "reason": why}),
        None => Value::Null,
    };
    let pt = &r.property_t;
    let mut doc = json!({
        "schema": SCHEMA,
        "version": SCHEMA_VERSION,
        "graph": {
            "vertices": g.names(),
            "edges": g.edges().iter().map(|&(a, b)| json!([g.name(a), g.name(b)])).collect::<Vec<_>>(),
        },
        "classes": dd.classes.iter().zip(&dd.kinds).map(|(&c, &k)| json!({
            "vertices": names(g, c),
            "kind": kind_name(k),
        })).collect::<Vec<_>>(),
        "domination": pairs,
        "sils": r.sils.iter().map(|s| json!({
            "x": g.name(s.x),
            "y": g.name(s.y),
            "z": g.name(s.z),
            "special": s.special,
        })).collect::<Vec<_>>(),
        "conditions": {
            "a1": {"holds": r.a1.holds, "witness": r.a1.witness.map(|(u, v)| json!([g.name(u), g.name(v)]))},
            "a2": {"holds": r.a2.holds, "witness": r.a2.witness.map(|v| g.name(v))},
            "a2_prime": {"holds": r.a2prime.holds, "witness": r.a2prime.witness.map(|(x, c)| json!({
                "class": names(g, x),
                "component": names(g, c),
            }))},
        },
        "finite_out": r.finite_out,
        "virtually_nilpotent": r.virtually_nilpotent,
        "large": opt(&r.large),
        "virtually_indicable": opt(&r.virtually_indicable),
        "property_t": {
            "verdict": pt.verdict.to_string(),
            "rule": pt.rule.number(),
            "reason": pt.reason,
            "citation": pt.citation,
            "corroborating": pt.corroborating.iter().map(|r| r.number()).collect::<Vec<_>>(),
        },
        "witness": r.witness.as_ref().map(|w| w.text.clone()),
        "witness_error": r.witness_error,
    });
    if certify {
        let principality: Vec<Value> = class_component_pairs(g, dd)
            .into_iter()
            .filter_map(|(x, c)| is_principal(g, dd, x, c).ok())
            .map(|rep| {
                json!({
                    "class": names(g, rep.class),
                    "component": names(g, rep.component),
                    "principal": rep.principal,
                    "certificate": certificate(&rep.certificate),
                })
            })
            .collect();
        let witness = r.witness.as_ref().map(|w| match &w.reason {
            WitnessReason::A1Failure { u, v } => json!({"a1_failure": [g.name(*u), g.name(*v)]}),
            WitnessReason::Pipeline(p) => json!({"pipeline": pipeline(g, p)}),
        });
        doc["certificates"] = json!({
            "principality": principality,
            "witness": witness,
        });
    }
    doc
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn holds(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}

pub fn analysis_text(g: &SimplicialGraph, r: &AnalysisReport, certify: bool) -> String {
    let dd = &r.dd;
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    line(format!("graph: {} vertices, {} edges", r.n, r.edges));
    let classes: Vec<String> = dd
        .classes
        .iter()
        .zip(&dd.kinds)
        .map(|(&c, &k)| format!("{} {}", g.format_set(c), kind_name(k)))
        .collect();
    line(format!("classes: {}", classes.join(", ")));
    if r.sils.is_empty() {
        line("SILs: none".into());
    } else {
        let shown: Vec<String> = r
            .sils
            .iter()
            .take(5)
            .map(|s| {
                format!(
                    "({}, {} | {}){}",
                    g.name(s.x),
                    g.name(s.y),
                    g.name(s.z),
                    if s.special { " special" } else { "" }
                )
            })
            .collect();
        let more = r.sils.len().saturating_sub(5);
        line(format!(
            "SILs: {}{}",
            shown.join(", "),
            if more > 0 { format!(" and {more} more") } else { String::new() }
        ));
    }
    let a1 = match r.a1.witness {
        Some((u, v)) => format!("fails at {} <= {}", g.name(u), g.name(v)),
        None => "holds".into(),
    };
    line(format!("(A1): {a1}"));
    let a2 = match r.a2.witness {
        Some(v) => format!("fails at {}", g.name(v)),
        None => "holds".into(),
    };
    line(format!("(A2): {a2}"));
    let a2p = match r.a2prime.witness {
        Some((x, c)) => format!("fails at ({}, {})", g.format_set(x), g.format_set(c)),
        None => "holds".into(),
    };
    line(format!("(A2'): {a2p}"));
    line(format!("finite Out(A_Γ): {}", yes_no(r.finite_out)));
    line(format!("virtually nilpotent: {}", yes_no(r.virtually_nilpotent)));
    let opt = |o: &Option<(bool, String)>| match o {
        Some((b, why)) => format!("{} ({why})", yes_no(*b)),
        None => "unknown".into(),
    };
    line(format!("large: {}", opt(&r.large)));
    line(format!("virtually indicable: {}", opt(&r.virtually_indicable)));
    let pt = &r.property_t;
    line(format!("property (T): {} ({})", pt.verdict, pt.reason));
    line(format!("  {}: {}", pt.rule, pt.citation));
    if !pt.corroborating.is_empty() {
        let rs: Vec<String> = pt.corroborating.iter().map(|r| r.to_string()).collect();
        line(format!("  also: {}", rs.join(", ")));
    }
    if let Some(e) = &r.witness_error {
        line(format!("witness error: {e}"));
    }
    if certify {
        if let Some(WitnessReason::Pipeline(p)) = r.witness.as_ref().map(|w| &w.reason) {
            line(format!("pipeline: case {}, shape {}", p.case.tag(), p.shape));
            line(format!("  Π = {:?}", p.pi));
            line(format!("  Π^⊥ basis = {:?}", p.perp_basis));
            for m in &p.generator_matrices {
                line(format!("  C{}: restricted {:?}, mask {:?}", m.component, m.restricted, m.mask));
            }
            line(format!("  abelian rank {}", p.abelian_rank));
        }
        for (x, c) in class_component_pairs(g, dd) {
            if let Ok(rep) = is_principal(g, dd, x, c) {
                let power = rep
                    .certificate
                    .minimal_power
                    .as_ref()
                    .map(|p| format!(", least power {p}"))
                    .unwrap_or_default();
                line(format!(
                    "pair ({}, {}): {}{}",
                    g.format_set(x),
                    g.format_set(c),
                    if rep.principal { "principal" } else { "not principal" },
                    power
                ));
            }
        }
    }
    out
}

pub fn shape_json(shape: &FreeProductShape) -> Result<Value, outraag::Error> {
    let cx = build_cover_complex(shape);
    let (h1, vm1) = homology_dims(&cx)?;
    let coords = Vm1Coordinates::new(&cx)?;
    let mut actions = Vec::new();
    for a in 0..shape.generators() {
        for support in supports_avoiding(shape, shape.factor_of(a)) {
            let chain = rho_pi_chain(&coords, a, &support)?;
            let closed = rho_pi_pc(shape, a, &support)?;
            let labels: Vec<String> = support.iter().map(|&f| shape.factor_label(f)).collect();
            actions.push(json!({
                "multiplier": shape.label(a),
                "support": labels,
                "matrix": rat_matrix(&chain),
                "closed_form_agrees": chain == closed,
            }));
        }
    }
    Ok(json!({
        "schema": "outraag.representation",
        "version": SCHEMA_VERSION,
        "shape": shape.to_string(),
        "h1_dim": h1,
        "vm1_dim": vm1,
        "boundary_1": cx.d1,
        "boundary_2": cx.d2,
        "actions": actions,
    }))
}

pub fn shape_text(v: &Value) -> String {
    let mut out = format!(
        "shape {}: dim H_1 = {}, dim V_-1 = {}\n",
        v["shape"].as_str().unwrap_or(""),
        v["h1_dim"],
        v["vm1_dim"]
    );
    for a in v["actions"].as_array().into_iter().flatten() {
        let rows: Vec<String> = a["matrix"]
            .as_array()
            .into_iter()
            .flatten()
            .map(|r| {
                let cells: Vec<&str> = r.as_array().into_iter().flatten().filter_map(Value::as_str).collect();
                format!("[{}]", cells.join(" "))
            })
            .collect();
        let sup: Vec<&str> = a["support"].as_array().into_iter().flatten().filter_map(Value::as_str).collect();
        out.push_str(&format!(
            "π^{}_{{{}}}: {}{}\n",
            a["multiplier"].as_str().unwrap_or(""),
            sup.join(","),
            rows.join(" "),
            if a["closed_form_agrees"].as_bool() == Some(false) { "  (differs from closed form)" } else { "" }
        ));
    }
    out
}

pub fn relations_json(g: &SimplicialGraph, pc: &RelationReport, split: &SplittingReport) -> Value {
    json!({
        "schema": "outraag.relations",
        "version": SCHEMA_VERSION,
        "pc_transvection": {
            "checked": pc.checked,
            "normalized_sign_flips": pc.normalized_sign_flips,
            "violations": pc.violations.iter().map(|v| json!({
                "case": format!("{:?}", v.case),
                "multiplier": g.name(v.v),
                "component": names(g, v.component),
                "transvection": [g.name(v.x), g.name(v.y)],
                "sign": v.sign,
                "detail": v.detail,
            })).collect::<Vec<_>>(),
        },
        "splitting": {
            "checked": split.checked,
            "weak_hypotheses_hold": split.weak_hypotheses_hold,
            "violations": split.violations.iter().map(|v| json!({
                "relation": format!("{:?}", v.relation),
                "level": format!("{:?}", v.level),
                "vertices": v.vertices.iter().map(|&u| g.name(u)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        },
    })
}

pub fn relations_text(g: &SimplicialGraph, pc: &RelationReport, split: &SplittingReport) -> String {
    let mut out = format!(
        "partial conjugation / transvection relations: {} instances, {} violations ({})\n",
        pc.checked.iter().sum::<usize>(),
        pc.violations.len(),
        holds(pc.violations.is_empty())
    );
    for v in &pc.violations {
        out.push_str(&format!(
            "  {:?}: π^{}_{} against R^{}_{} sign {}: {}\n",
            v.case,
            g.name(v.v),
            g.format_set(v.component),
            g.name(v.y),
            g.name(v.x),
            v.sign,
            v.detail
        ));
    }
    out.push_str(&format!(
        "splitting relations: {} instances, {} violations ({})\n",
        split.checked.iter().sum::<usize>(),
        split.violations.len(),
        holds(split.ok())
    ));
    for v in &split.violations {
        let vs: Vec<&str> = v.vertices.iter().map(|&u| g.name(u)).collect();
        out.push_str(&format!("  {:?} at {:?} level on {}\n", v.relation, v.level, vs.join(", ")));
    }
    if split.weak_hypotheses_hold {
        out.push_str("classes are all abelian and no SIL (x, y | z) has z <= x, y\n");
    }
    out
}
