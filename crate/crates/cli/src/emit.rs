//! Report emission: exact values rendered into JSON with stable key
//! order (objects are sorted maps, arrays keep canonical order), so
//! repeated runs produce byte-identical output.

use serde_json::{json, Map, Value};

use orbigw_core::group::FiniteGroup;
use orbigw_core::invariants::{
    Agreement, CheckEntry, CheckReport, ComponentLine, InvariantReport, Outcome, TwistedReport,
};
use orbigw_core::poly::{TorusPolynomial, TorusRationalFn};

/// Polynomials serialize as maps from comma-joined exponent vectors to
/// rational strings.
pub fn poly_json(p: &TorusPolynomial) -> Value {
    let mut map = Map::new();
    for (key, coeff) in p.to_string_map() {
        map.insert(key, Value::String(coeff));
    }
    Value::Object(map)
}

/// A rational function serializes as its polynomial map when the
/// denominator divides exactly, and as a numerator/denominator pair
/// otherwise.
pub fn ratfn_json(f: &TorusRationalFn) -> Value {
    match f.to_polynomial() {
        Some(p) => json!({ "polynomial": poly_json(&p) }),
        None => json!({
            "numerator": poly_json(f.num()),
            "denominator": poly_json(f.den()),
        }),
    }
}

fn components_json(components: &[ComponentLine]) -> Value {
    Value::Array(
        components
            .iter()
            .map(|line| {
                let mut obj = Map::new();
                obj.insert("key".into(), Value::String(line.key.clone()));
                for (name, value) in &line.fields {
                    obj.insert((*name).into(), Value::String(value.clone()));
                }
                Value::Object(obj)
            })
            .collect(),
    )
}

fn agreement_json(a: Agreement) -> Value {
    match a {
        Agreement::Agree => Value::Bool(true),
        Agreement::Disagree => Value::Bool(false),
        Agreement::NotApplicable => Value::String("not_applicable".into()),
    }
}

pub fn invariant_json(report: &InvariantReport, breakdown: bool) -> Value {
    let mut routes = Map::new();
    for r in &report.routes {
        routes.insert(r.id.to_string(), Value::String(r.value.to_string()));
    }
    let mut obj = Map::new();
    obj.insert("invariant".into(), Value::String(report.invariant.into()));
    obj.insert("model".into(), Value::String(report.model.into()));
    obj.insert("routes".into(), Value::Object(routes));
    obj.insert("value".into(), Value::String(report.value().to_string()));
    obj.insert("agree".into(), agreement_json(report.agree));
    obj.insert(
        "constancy".into(),
        match report.constancy {
            Some(ok) => Value::Bool(ok),
            None => Value::String("not_applicable".into()),
        },
    );
    if breakdown {
        obj.insert("components".into(), components_json(&report.components));
    }
    Value::Object(obj)
}

pub fn twisted_json(report: &TwistedReport, breakdown: bool) -> Value {
    let mut obj = Map::new();
    obj.insert("invariant".into(), Value::String("twisted".into()));
    obj.insert("k".into(), json!(report.k));
    obj.insert("twist_order".into(), json!(report.twist_order));
    obj.insert("lhs".into(), ratfn_json(&report.lhs));
    obj.insert("rhs_printed".into(), ratfn_json(&report.rhs_printed));
    obj.insert("rhs_variant".into(), ratfn_json(&report.rhs_variant));
    obj.insert(
        "lhs_equals_rhs_printed".into(),
        Value::Bool(report.lhs_matches_printed),
    );
    obj.insert(
        "lhs_equals_rhs_variant".into(),
        Value::Bool(report.lhs_matches_variant),
    );
    if breakdown {
        obj.insert("components".into(), components_json(&report.components));
    }
    Value::Object(obj)
}

fn check_entry_json(entry: &CheckEntry) -> Value {
    json!({
        "name": entry.name,
        "outcome": match entry.outcome {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Info => "info",
        },
        "witness": entry.witness,
    })
}

pub fn check_json(report: &CheckReport) -> Value {
    json!({
        "all_pass": report.all_pass(),
        "checks": Value::Array(report.entries.iter().map(check_entry_json).collect()),
    })
}

/// Structure tables for one group: conjugacy classes, bi-conjugacy
/// classes, and bicyclic subgroup classes with their counts.
pub fn group_info_json(group: &FiniteGroup, scope: &str) -> Value {
    let classes: Vec<Value> = group
        .conjugacy_classes()
        .iter()
        .map(|c| Value::Array(c.iter().map(|&e| json!(e)).collect()))
        .collect();
    let bi_classes: Vec<Value> = group
        .bi_conjugacy_classes()
        .iter()
        .map(|c| {
            json!({
                "rep": [c.rep.0, c.rep.1],
                "orbit_size": c.orbit_size,
                "centralizer_order": c.centralizer.order(),
                "centralizer": c.centralizer.key(),
            })
        })
        .collect();
    let bics = group.bicyclic_subgroups();
    let subgroup_classes: Vec<Value> = bics
        .classes
        .iter()
        .map(|c| {
            json!({
                "representative": c.rep.key(),
                "order": c.rep.order(),
                "conjugates": c.conjugate_count(),
                "generating_pairs": c.generating_pairs,
            })
        })
        .collect();
    json!({
        "scope": scope,
        "order": group.order(),
        "exponent": group.exponent(),
        "element_orders": (0..group.order()).map(|e| group.element_order(e)).collect::<Vec<_>>(),
        "conjugacy_class_count": group.conjugacy_classes().len(),
        "conjugacy_classes": classes,
        "commuting_pairs": group.commuting_pairs().len(),
        "bi_conjugacy_classes": bi_classes,
        "bicyclic_subgroups": {
            "distinct_count": bics.distinct.len(),
            "classes": subgroup_classes,
        },
    })
}

/// Renders with sorted object keys and a trailing newline.
pub fn render(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}
