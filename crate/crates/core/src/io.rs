//! JSON input formats for groups and extensions, and the dual-data report.
//!
//! Group: `{"name", "order", "mul"}` or `{"name", "degree", "generators"}`,
//! or a string naming a built-in group. Extension: `{"H", "normal"}` or
//! `{"G", "Q", "action", "tau"}`. Indices are 0-based and the identity is
//! index 0.

use serde::Deserialize;
use serde_json::{json, Value};

use crate::cohft::c_regular_classes;
use crate::error::{Error, Result};
use crate::groups::{
    catalog_entry, conjugacy_classes, fingerprint, named_group, FiniteGroup, GroupExtension, DEFAULT_ORDER_CAP,
    SPLIT_SEARCH_MAX_Q,
};
use crate::mackey::DualData;

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::Parse(format!("missing field \"{key}\"")))
}

fn from_field<T: for<'de> Deserialize<'de>>(v: &Value, key: &str) -> Result<T> {
    serde_json::from_value(field(v, key)?.clone()).map_err(|e| Error::Parse(format!("field \"{key}\": {e}")))
}

/// A group from its JSON description or a name.
pub fn parse_group(v: &Value) -> Result<FiniteGroup> {
    if let Some(name) = v.as_str() {
        return match catalog_entry(name) {
            Ok(entry) => Ok(entry.extension.h),
            Err(_) => named_group(name),
        };
    }
    if !v.is_object() {
        return Err(Error::Parse("a group must be an object or a name".into()));
    }
    let name: String = match v.get("name") {
        Some(n) => serde_json::from_value(n.clone()).map_err(parse_err)?,
        None => "H".into(),
    };
    if v.get("mul").is_some() {
        let mul: Vec<Vec<usize>> = from_field(v, "mul")?;
        if let Some(order) = v.get("order") {
            let order: usize = serde_json::from_value(order.clone()).map_err(parse_err)?;
            if order != mul.len() {
                return Err(Error::MalformedTable {
                    row: mul.len().min(order),
                    col: 0,
                    reason: format!("order is {order} but the table has {} rows", mul.len()),
                });
            }
        }
        FiniteGroup::from_table(&name, mul)
    } else if v.get("generators").is_some() {
        let degree: usize = from_field(v, "degree")?;
        let generators: Vec<Vec<usize>> = from_field(v, "generators")?;
        FiniteGroup::from_permutation_generators(&name, degree, &generators, DEFAULT_ORDER_CAP)
    } else {
        Err(Error::Parse("a group needs \"mul\" or \"generators\"".into()))
    }
}

/// The normal subgroup, as a list or as `{"normal": [..]}`.
pub fn parse_normal(v: &Value) -> Result<Vec<usize>> {
    let list = match v.get("normal") {
        Some(inner) => inner,
        None => v,
    };
    serde_json::from_value(list.clone()).map_err(|e| Error::Parse(format!("normal subgroup: {e}")))
}

pub fn parse_extension(v: &Value) -> Result<GroupExtension> {
    if v.get("H").is_some() {
        let h = parse_group(field(v, "H")?)?;
        let normal = parse_normal(field(v, "normal")?)?;
        GroupExtension::from_quotient(&h, &normal)
    } else if v.get("G").is_some() {
        let g = parse_group(field(v, "G")?)?;
        let q = parse_group(field(v, "Q")?)?;
        let action: Vec<Vec<usize>> = from_field(v, "action")?;
        let tau: Vec<Vec<usize>> = from_field(v, "tau")?;
        GroupExtension::from_cocycle(&g, &q, &action, &tau)
    } else {
        Err(Error::Parse(
            "an extension needs \"H\" and \"normal\", or \"G\", \"Q\", \"action\" and \"tau\"".into(),
        ))
    }
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(parse_err)
}

fn group_summary(g: &FiniteGroup) -> Value {
    json!({
        "name": g.name(),
        "order": g.order(),
        "abelian": g.is_abelian(),
        "fingerprint": fingerprint(g),
    })
}

/// A small generating set, chosen greedily by index.
pub fn generators(group: &FiniteGroup, elems: &[usize]) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = vec![0usize];
    for &x in elems {
        if span.contains(&x) {
            continue;
        }
        gens.push(x);
        let mut frontier = span.clone();
        frontier.push(x);
        span = closure(group, &frontier);
    }
    gens
}

fn closure(group: &FiniteGroup, gens: &[usize]) -> Vec<usize> {
    let mut set = vec![0usize];
    let mut i = 0;
    while i < set.len() {
        for &g in gens {
            let y = group.mul(set[i], g);
            if !set.contains(&y) {
                set.push(y);
            }
        }
        i += 1;
    }
    set.sort_unstable();
    set
}

/// Action table, orbits, stabilizers, the cocycle and the gauge record,
/// plus the components of the dual `[Ghat / Q]`.
pub fn dual_report(dual: &DualData) -> Result<Value> {
    let ext = &dual.ext;
    let stabs = dual.stabilizers()?;
    let orbits: Vec<Value> = dual
        .orbits
        .iter()
        .zip(&stabs)
        .map(|(o, s)| {
            let regular = c_regular_classes(s, 1e-9);
            json!({
                "representative": o.representative,
                "members": o.members,
                "dim": dual.dim(o.representative),
                "stabilizer": o.stabilizer,
                "stabilizer_order": o.stabilizer.len(),
                "stabilizer_generators": generators(&ext.q, &o.stabilizer),
                "regular_classes": regular,
            })
        })
        .collect();
    let cocycle: Vec<Vec<Vec<[f64; 2]>>> = dual
        .cocycle
        .iter()
        .map(|t| t.iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect())
        .collect();
    let components: Vec<String> = dual
        .orbits
        .iter()
        .zip(&stabs)
        .map(|(o, s)| {
            format!(
                "B(Stab of irrep {}, order {}) twisted by c, weight dim {}",
                o.representative,
                s.order(),
                dual.dim(o.representative)
            )
        })
        .collect();
    Ok(json!({
        "G": group_summary(&ext.g),
        "H": group_summary(&ext.h),
        "Q": group_summary(&ext.q),
        "split": ext.is_split(SPLIT_SEARCH_MAX_Q),
        "classes_of_H": conjugacy_classes(&ext.h).num_classes(),
        "irrep_dims": dual.irreps.dims(),
        "trivial_band": dual.is_trivial_band(),
        "action": dual.action,
        "orbits": orbits,
        "cocycle": cocycle,
        "gauge": dual.gauge,
        "dual_space": components,
    }))
}
