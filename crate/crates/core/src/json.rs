//! JSON interchange for [`IdfSet`], [`Dbm`] and [`CpDbmPlus`].
//!
//! ```text
//! IdfSet   { "dim": n, "cells": [ { "z": automaton, "d": [ region ] } ] }
//! automaton { "states": int, "initial": int, "accepting": [int],
//!             "transitions": [ [target per letter] ] }
//! region   [ { "coeffs": [int], "rel": "le"|"lt"|"eq", "const": int } ]
//! Dbm      { "n": int, "bounds": [ [ { "value": int | "inf", "strict": bool } ] ] }
//! CpDbmPlus { "n": int, "relations": [ [ "le"|"lt" ] ], "phi": formula over c_i_j,
//!             "infinite": [ [bool] ] }
//! ```
//!
//! Integers are written as JSON numbers of arbitrary size. Automaton letters
//! are ordered lexicographically on digit-vectors, component 0 first.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Number, Value};

use crate::dbm::{Bound, CpDbmPlus, Dbm};
use crate::decimal::{ConvexRegion, DRel, DecimalSet, LinearConstraintD};
use crate::error::{Error, Result};
use crate::frontend::parse;
use crate::idf::{Cell, IdfSet};
use crate::presburger::IntegerSet;

fn malformed(what: impl Into<String>) -> Error {
    Error::Malformed(what.into())
}

fn big_value(v: &BigInt) -> Value {
    Value::Number(Number::from_str(&v.to_string()).expect("integers are valid JSON numbers"))
}

fn big_of(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string()).map_err(|_| malformed(format!("{what}: not an integer"))),
        _ => Err(malformed(format!("{what}: expected an integer"))),
    }
}

fn usize_of(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| malformed(format!("{what}: expected a non-negative integer")))
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| malformed(format!("missing field `{key}`")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| malformed(format!("{what}: expected an array")))
}

fn matrix<T>(v: &Value, k: usize, what: &str, cell: impl Fn(&Value) -> Result<T>) -> Result<Vec<Vec<T>>> {
    let rows = array(v, what)?;
    if rows.len() != k {
        return Err(malformed(format!("{what}: expected {k} rows")));
    }
    rows.iter()
        .map(|r| {
            let r = array(r, what)?;
            if r.len() != k {
                return Err(malformed(format!("{what}: expected {k} columns")));
            }
            r.iter().map(&cell).collect()
        })
        .collect()
}

pub fn integer_set_to_json(z: &IntegerSet) -> Value {
    let transitions: Vec<Value> = (0..z.num_states() as u32).map(|q| json!(z.row(q))).collect();
    json!({
        "states": z.num_states(),
        "initial": z.initial(),
        "accepting": z.accepting_states(),
        "transitions": transitions,
    })
}

pub fn integer_set_from_json(dim: usize, v: &Value) -> Result<IntegerSet> {
    let states = usize_of(field(v, "states")?, "states")?;
    let initial = usize_of(field(v, "initial")?, "initial")?;
    let mut accepting = vec![false; states];
    for a in array(field(v, "accepting")?, "accepting")? {
        let q = usize_of(a, "accepting")?;
        *accepting.get_mut(q).ok_or_else(|| malformed("accepting state out of range"))? = true;
    }
    let rows = array(field(v, "transitions")?, "transitions")?;
    if rows.len() != states {
        return Err(malformed("one transition row per state expected"));
    }
    let mut trans = Vec::new();
    for r in rows {
        for t in array(r, "transitions")? {
            trans.push(u32::try_from(usize_of(t, "transition")?).map_err(|_| malformed("transition target"))?);
        }
    }
    IntegerSet::from_parts(dim, initial as u32, accepting, trans)
}

fn rel_name(r: DRel) -> &'static str {
    match r {
        DRel::Le => "le",
        DRel::Lt => "lt",
        DRel::Eq => "eq",
    }
}

pub fn decimal_set_to_json(d: &DecimalSet) -> Value {
    Value::Array(
        d.regions()
            .iter()
            .map(|r| {
                Value::Array(
                    r.constraints()
                        .iter()
                        .map(|c| {
                            json!({
                                "coeffs": c.coeffs.iter().map(big_value).collect::<Vec<_>>(),
                                "rel": rel_name(c.rel),
                                "const": big_value(&c.constant),
                            })
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn decimal_set_from_json(dim: usize, v: &Value) -> Result<DecimalSet> {
    let mut regions = Vec::new();
    for r in array(v, "d")? {
        let mut cs = Vec::new();
        for c in array(r, "region")? {
            let coeffs = array(field(c, "coeffs")?, "coeffs")?
                .iter()
                .map(|a| big_of(a, "coeffs"))
                .collect::<Result<Vec<_>>>()?;
            let rel = match field(c, "rel")?.as_str() {
                Some("le") => DRel::Le,
                Some("lt") => DRel::Lt,
                Some("eq") => DRel::Eq,
                _ => return Err(malformed("rel must be \"le\", \"lt\" or \"eq\"")),
            };
            cs.push(LinearConstraintD::new(coeffs, rel, big_of(field(c, "const")?, "const")?));
        }
        if let Some(region) = ConvexRegion::new(dim, cs)? {
            regions.push(region);
        }
    }
    DecimalSet::from_regions(dim, regions)
}

pub fn idf_to_json(f: &IdfSet) -> Value {
    let cells: Vec<Value> = f
        .cells()
        .iter()
        .map(|c| json!({ "z": integer_set_to_json(&c.zpart), "d": decimal_set_to_json(&c.dpart) }))
        .collect();
    json!({ "dim": f.dim(), "cells": cells })
}

pub fn idf_from_json(v: &Value) -> Result<IdfSet> {
    let dim = usize_of(field(v, "dim")?, "dim")?;
    let cells = array(field(v, "cells")?, "cells")?
        .iter()
        .map(|c| {
            Ok(Cell {
                zpart: integer_set_from_json(dim, field(c, "z")?)?,
                dpart: decimal_set_from_json(dim, field(c, "d")?)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    IdfSet::from_cells(dim, cells)
}

pub fn dbm_to_json(m: &Dbm) -> Value {
    let bounds: Vec<Value> = m
        .bounds()
        .iter()
        .map(|row| {
            Value::Array(
                row.iter()
                    .map(|b| {
                        let value = b.value.as_ref().map_or_else(|| json!("inf"), big_value);
                        json!({ "value": value, "strict": b.strict })
                    })
                    .collect(),
            )
        })
        .collect();
    json!({ "n": m.n(), "bounds": bounds })
}

pub fn dbm_from_json(v: &Value) -> Result<Dbm> {
    let n = usize_of(field(v, "n")?, "n")?;
    let bounds = matrix(field(v, "bounds")?, n + 1, "bounds", |b| {
        let strict = field(b, "strict")?
            .as_bool()
            .ok_or_else(|| malformed("strict: expected a boolean"))?;
        let value = match field(b, "value")? {
            Value::String(s) if s == "inf" => None,
            other => Some(big_of(other, "value")?),
        };
        Ok(Bound { value, strict })
    })?;
    Dbm::from_bounds(n, bounds)
}

/// CP-DBM+ with `phi` given as formula text over the names `c_i_j`.
pub fn cpdbm_from_json(v: &Value) -> Result<CpDbmPlus> {
    let n = usize_of(field(v, "n")?, "n")?;
    let k = n + 1;
    let strict = matrix(field(v, "relations")?, k, "relations", |r| match r.as_str() {
        Some("le") => Ok(false),
        Some("lt") => Ok(true),
        _ => Err(malformed("relations: expected \"le\" or \"lt\"")),
    })?;
    let infinite = match v.get("infinite") {
        None => vec![vec![false; k]; k],
        Some(m) => matrix(m, k, "infinite", |b| {
            b.as_bool().ok_or_else(|| malformed("infinite: expected a boolean"))
        })?,
    };
    let text = field(v, "phi")?
        .as_str()
        .ok_or_else(|| malformed("phi: expected formula text"))?;
    CpDbmPlus::from_formula(n, strict, infinite, &parse(text)?)
}

/// The relation and infinite matrices of `p`; `phi` is an automaton, so it
/// is written in the IdfSet automaton schema under `"phi_automaton"`.
pub fn cpdbm_to_json(p: &CpDbmPlus) -> Value {
    let k = p.n() + 1;
    let relations: Vec<Vec<&str>> = (0..k)
        .map(|i| (0..k).map(|j| if p.is_strict(i, j) { "lt" } else { "le" }).collect())
        .collect();
    let infinite: Vec<Vec<bool>> = (0..k).map(|i| (0..k).map(|j| p.is_infinite(i, j)).collect()).collect();
    let mut obj = Map::new();
    obj.insert("n".into(), json!(p.n()));
    obj.insert("relations".into(), json!(relations));
    obj.insert("infinite".into(), json!(infinite));
    obj.insert("phi_automaton".into(), integer_set_to_json(p.phi()));
    Value::Object(obj)
}

/// What `cpdbm-decompose` accepts: a CP-DBM+, a plain DBM, or an array of
/// either (their union).
pub fn decompose_input(v: &Value) -> Result<IdfSet> {
    match v {
        Value::Array(items) => {
            let mut parts = items.iter().map(decompose_input);
            let first = parts.next().ok_or_else(|| malformed("empty union"))??;
            parts.try_fold(first, |acc, f| acc.union(&f?))
        }
        Value::Object(o) if o.contains_key("bounds") => CpDbmPlus::from_dbm(&dbm_from_json(v)?)?.decompose(),
        Value::Object(_) => cpdbm_from_json(v)?.decompose(),
        _ => Err(malformed("expected a CP-DBM+ object, a DBM object or an array")),
    }
}
