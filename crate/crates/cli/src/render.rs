//! JSON rendering of library values. Everything mathematical goes through
//! the exact text forms of the library; no floats reach the output.

use serde_json::{json, Value};

use sheet_atlas::exactalg::{LaurentPolynomial, RootOfUnity};
use sheet_atlas::lattice_roots::{isogeny_kernel, IsogenyDescriptor, RootSystem};
use sheet_atlas::pseudolevi::{render_coroot_product, Frame, PseudoLevi, ShiftedTorus};
use sheet_atlas::quotient::NormalityReport;
use sheet_atlas::sheets::{exceptional_case_predicate, OrbitSpace, SheetDescriptor, SheetWeylData};
use sheet_atlas::weyl::{Subgroup, WeylGroup};
use sheet_atlas::Error;

/// `3α1+2α2`, `-α0` style text for a vector in simple-root coordinates.
pub fn root_text(v: &[i64]) -> String {
    let mut out = String::new();
    for (i, &c) in v.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if c < 0 {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if c.abs() != 1 {
            out.push_str(&c.abs().to_string());
        }
        out.push_str(&format!("α{}", i + 1));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn group(rs: &RootSystem, x: &IsogenyDescriptor) -> Value {
    let kernel: Vec<String> = isogeny_kernel(rs, x)
        .iter()
        .map(|p| {
            p.finite_part()
                .iter()
                .enumerate()
                .map(|(i, &q)| format!("α{}^∨({})", i + 1, RootOfUnity::new(q)))
                .collect::<Vec<_>>()
                .join("·")
        })
        .collect();
    json!({
        "name": x.group_name(),
        "root_system": rs.name(),
        "lattice_basis": x.basis(),
        "fundamental_group_index": x.index(),
        "isogeny_kernel": kernel,
    })
}

fn coset(x: &IsogenyDescriptor, index: usize, c: &ShiftedTorus) -> Value {
    json!({
        "index": index,
        "component": c.component,
        "dim": c.dim(),
        "representative": render_coroot_product(x, &c.representative),
        "excluded": c.excluded.iter().map(ToString::to_string).collect::<Vec<_>>(),
    })
}

pub fn pseudo_levi(x: &IsogenyDescriptor, index: usize, pl: &PseudoLevi) -> Value {
    json!({
        "index": index,
        "nodes": pl.nodes,
        "nodes_text": pl.node_string(),
        "type": pl.subsystem.type_string(),
        "isolated": pl.is_isolated,
        "levi": pl.is_levi,
        "center": {
            "dim": pl.center.dim(),
            "invariant_factors": pl.center.invariant_factors,
            "component_group_order": pl.center.component_group_order(),
        },
        "cosets": pl.cosets.iter().enumerate().map(|(i, c)| coset(x, i, c)).collect::<Vec<_>>(),
    })
}

pub fn sheet(s: &SheetDescriptor) -> Value {
    let class: usize = s.id.split('.').next().and_then(|p| p.parse().ok()).expect("ids start with the class index");
    json!({
        "id": s.id,
        "pseudo_levi": class,
        "coset": s.coset_index,
        "nodes_text": s.pseudo_levi.node_string(),
        "type": s.pseudo_levi.subsystem.type_string(),
        "labels": s.labels,
        "label": s.label_string(),
        "dixmier": s.is_dixmier(),
        "dim_center": s.coset.dim(),
    })
}

/// Greedy generating set in element order.
fn generators(w: &WeylGroup, g: &Subgroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = w.closure(&[]);
    for &x in g.elements() {
        if !span.contains(x) {
            gens.push(x);
            span = w.closure(&gens);
        }
    }
    gens
}

fn element(w: &WeylGroup, x: usize) -> Value {
    json!({
        "word": w.word_string(x),
        "reflection": w.reflection_root(x).map(|r| root_text(w.root_system().root(r))),
    })
}

fn subgroup(w: &WeylGroup, g: &Subgroup, gens: Option<&[usize]>, list_elements: bool) -> Value {
    let gens = gens.map_or_else(|| generators(w, g), <[usize]>::to_vec);
    let mut reflections: Vec<String> =
        g.elements().iter().filter_map(|&x| w.reflection_root(x)).map(|r| root_text(w.root_system().root(r))).collect();
    reflections.sort();
    let mut v = json!({
        "order": g.order(),
        "generators": gens.iter().map(|&x| element(w, x)).collect::<Vec<_>>(),
        "reflections": reflections,
    });
    if list_elements {
        v["elements"] = g.elements().iter().map(|&x| Value::String(w.word_string(x))).collect();
    }
    v
}

pub fn sheet_info(frame: &Frame<'_>, s: &SheetDescriptor, data: &SheetWeylData) -> Value {
    let w = frame.weyl;
    json!({
        "sheet": sheet(s),
        "w_pi": subgroup(w, &data.w_pi, None, false),
        "w_upper_pi": subgroup(w, &data.w_upper_pi, None, false),
        "coset_stabilizer": subgroup(w, &data.coset_stabilizer, None, false),
        "ws": subgroup(w, &data.ws, Some(&data.generators), true),
        "ws_u": subgroup(w, &data.ws_u, None, true),
        "ws_u_unfiltered": data.ws_u_unfiltered,
        "factorization_unique": data.factorization_unique,
        "exceptional_case_predicate": exceptional_case_predicate(frame.lattice, s),
    })
}

pub fn orbit_space(w: &WeylGroup, os: &OrbitSpace) -> Value {
    json!({
        "k": os.dim,
        "representative": os.representative_text,
        "generators": os.generator_elements.iter().zip(&os.generators).map(|(&x, m)| json!({
            "element": w.word_string(x),
            "map": m.to_string(),
            "fixed_points": m.fixed_point_count(),
        })).collect::<Vec<_>>(),
        "group_order": os.group.len(),
        "group": os.group.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "group_law_verified": os.group_law_verified,
        "excluded": os.excluded.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "excluded_values": os.excluded_values.as_ref().map(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>()),
        "caveat": os.caveat.is_some(),
        "caveat_reason": os.caveat,
    })
}

fn polys(ps: &[LaurentPolynomial]) -> Vec<String> {
    ps.iter().map(ToString::to_string).collect()
}

pub fn normality(w: &WeylGroup, s: &SheetDescriptor, r: &NormalityReport) -> Value {
    let verdict = match r.is_normal() {
        Some(true) => "normal",
        Some(false) => "not_normal",
        None => "inconclusive_at_bound",
    };
    let certificates: Vec<Value> = r
        .verdict
        .certificates
        .iter()
        .enumerate()
        .map(|(i, c)| {
            json!({
                "target": i + 1,
                "expression": c.as_ref().map(|c| c.render("g")),
                "verified": c.as_ref().is_some_and(|c| c.verify(&r.image_generators, &r.target_generators[i])),
            })
        })
        .collect();
    let witness = r.verdict.witness.as_ref().map(|wt| {
        json!({
            "point": wt.point.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "roots_of_unity": wt.roots_of_unity.as_ref().map(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>()),
            "target": wt.target_index + 1,
            "target_value": wt.target_value.to_string(),
            "target_gradient": wt.target_gradient.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "coset_point": r.witness_point,
            "verified": wt.verify(&r.image_generators, &r.target_generators),
        })
    });
    json!({
        "sheet": sheet(s),
        "verdict": verdict,
        "surjectivity": r.verdict.status.as_str(),
        "degree_bound": r.verdict.degree_bound,
        "orbit_space": orbit_space(w, &r.orbit_space),
        "image_generators": polys(&r.image_generators),
        "target_generators": polys(&r.target_generators),
        "target_search_degree": r.target_search_degree,
        "certificates": certificates,
        "witness": witness,
    })
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidType(..) => "invalid_type",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::NotARoot(_) => "not_a_root",
        Error::BudgetExceeded { .. } => "budget_exceeded",
        Error::InvalidLattice(_) => "invalid_lattice",
        Error::UnknownIsogeny { .. } => "unknown_isogeny",
        Error::RigidTableIncomplete(_) => "rigid_table_incomplete",
        Error::RigidTableParse { .. } => "rigid_table_parse",
        Error::NotAGroup => "not_a_group",
        Error::DivisionByZero => "division_by_zero",
        Error::ConductorMismatch { .. } => "conductor_mismatch",
        Error::VariableMismatch(..) => "variable_mismatch",
        Error::NotStabilizing => "not_stabilizing",
        Error::NotDixmier(_) => "not_dixmier",
        Error::DegreeBoundTooSmall { .. } => "degree_bound_too_small",
        Error::HeightBoundInsufficient { .. } => "height_bound_insufficient",
        Error::Overflow => "overflow",
    }
}
