//! JSON input and output.
//!
//! Numbers are read from their decimal text, so in exact mode `0.1` is
//! exactly `1/10`; strings such as `"1/3"` are accepted everywhere a number
//! is expected.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::free::{FreeElement, LipFunction, Molecule, MoleculeRep, Space};
use crate::metric::{FiniteMetricSpace, PointSet};
use crate::scalar::Scalar;
use crate::tree::{L1Step, RTree, TreePoint, TreeSpace};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| parse_err(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| parse_err(format!("{}: {e}", path.display())))
}

pub fn parse_num<S: Scalar>(v: &Value) -> Result<S> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(parse_err(format!("expected a number, found {other}"))),
    };
    S::parse_str(text.trim()).ok_or_else(|| parse_err(format!("bad number {text}")))
}

/// Strings in exact mode, JSON numbers otherwise.
pub fn num_json<S: Scalar>(v: &S) -> Value {
    if S::EXACT {
        Value::String(v.to_string())
    } else {
        serde_json::Number::from_f64(v.to_f64()).map(Value::Number).unwrap_or(Value::Null)
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(format!("missing field {key}")))
}

fn str_of(v: &Value) -> Result<&str> {
    v.as_str().ok_or_else(|| parse_err(format!("expected a string, found {v}")))
}

fn array_of(v: &Value) -> Result<&Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(format!("expected an array, found {v}")))
}

fn object_of(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object().ok_or_else(|| parse_err(format!("expected an object, found {v}")))
}

/// `{"points": [..], "base": name, "dist": [[..]]}`, validated.
pub fn metric_from_json<S: Scalar>(v: &Value) -> Result<FiniteMetricSpace<S>> {
    let names: Vec<String> = array_of(field(v, "points")?)?.iter().map(|p| str_of(p).map(String::from)).collect::<Result<_>>()?;
    let base_name = str_of(field(v, "base")?)?;
    let base = names.iter().position(|n| n == base_name).ok_or_else(|| Error::BaseOutOfRange(base_name.into()))?;
    let matrix = array_of(field(v, "dist")?)?
        .iter()
        .map(|row| array_of(row)?.iter().map(parse_num).collect::<Result<Vec<S>>>())
        .collect::<Result<Vec<_>>>()?;
    FiniteMetricSpace::validate_metric(names, base, matrix)
}

pub fn metric_to_json<S: Scalar>(m: &FiniteMetricSpace<S>) -> Value {
    let dist: Vec<Value> = (0..m.len()).map(|i| Value::Array((0..m.len()).map(|j| num_json(m.d(i, j))).collect())).collect();
    json!({ "points": m.names(), "base": m.name(m.base()), "dist": dist })
}

fn coeff_map<S: Scalar>(names: &Value, space: &FiniteMetricSpace<S>) -> Result<BTreeMap<usize, S>> {
    let mut out: BTreeMap<usize, S> = BTreeMap::new();
    for (name, c) in object_of(names)? {
        let i = space.index_of(name)?;
        *out.entry(i).or_insert_with(S::zero) += parse_num(c)?;
    }
    Ok(out)
}

/// `{"coeffs": {point: number}}`; a `"space"` field is ignored here.
pub fn element_from_json<S: Scalar>(space: &Space<S>, v: &Value) -> Result<FreeElement<S>> {
    FreeElement::from_map(space, &coeff_map(field(v, "coeffs")?, space)?)
}

/// Inline `"space"` of a free element file, if present.
pub fn inline_space<S: Scalar>(v: &Value) -> Result<Option<FiniteMetricSpace<S>>> {
    match v.get("space") {
        Some(s) if s.is_object() => Ok(Some(metric_from_json(s)?)),
        _ => Ok(None),
    }
}

pub fn element_to_json<S: Scalar>(mu: &FreeElement<S>) -> Value {
    let space = mu.space();
    let coeffs: Map<String, Value> = mu.support().into_iter().map(|i| (space.name(i).to_string(), num_json(mu.coeff(i)))).collect();
    json!({ "coeffs": coeffs })
}

/// `{"terms": [{"x": name, "y": name, "a": number}]}`.
pub fn rep_from_json<S: Scalar>(space: &Space<S>, v: &Value) -> Result<MoleculeRep<S>> {
    let terms = array_of(field(v, "terms")?)?
        .iter()
        .map(|t| {
            Ok(Molecule {
                x: space.index_of(str_of(field(t, "x")?)?)?,
                y: space.index_of(str_of(field(t, "y")?)?)?,
                a: parse_num(field(t, "a")?)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    MoleculeRep::new(space, terms)
}

pub fn rep_to_json<S: Scalar>(rep: &MoleculeRep<S>) -> Value {
    let space = rep.space();
    let terms: Vec<Value> = rep
        .terms()
        .iter()
        .map(|t| json!({ "x": space.name(t.x), "y": space.name(t.y), "a": num_json(&t.a) }))
        .collect();
    json!({ "terms": terms })
}

/// `{"pairs": [[x, y], ..]}`, or the `(x, y)` of every term of a molecule
/// representation.
pub fn pairs_from_json<S: Scalar>(space: &Space<S>, v: &Value) -> Result<Vec<(usize, usize)>> {
    if let Some(pairs) = v.get("pairs") {
        return array_of(pairs)?
            .iter()
            .map(|p| {
                let p = array_of(p)?;
                if p.len() != 2 {
                    return Err(parse_err("a pair has two entries"));
                }
                Ok((space.index_of(str_of(&p[0])?)?, space.index_of(str_of(&p[1])?)?))
            })
            .collect();
    }
    Ok(rep_from_json(space, v)?.terms().iter().map(|t| (t.x, t.y)).collect())
}

pub fn pairs_to_json<S: Scalar>(space: &Space<S>, pairs: &[(usize, usize)]) -> Value {
    let list: Vec<Value> = pairs.iter().map(|&(x, y)| json!([space.name(x), space.name(y)])).collect();
    json!({ "pairs": list })
}

/// `{"values": {point: number}}`; unlisted points are zero.
pub fn lip_from_json<S: Scalar>(space: &Space<S>, v: &Value) -> Result<LipFunction<S>> {
    let mut values = vec![S::zero(); space.len()];
    for (i, c) in coeff_map(field(v, "values")?, space)? {
        values[i] = c;
    }
    LipFunction::new(space, values)
}

pub fn lip_to_json<S: Scalar>(f: &LipFunction<S>) -> Value {
    let space = f.space();
    let values: Map<String, Value> = (0..space.len()).map(|i| (space.name(i).to_string(), num_json(f.value(i)))).collect();
    json!({ "values": values })
}

/// `["a", "b"]` or `{"points": ["a", "b"]}`.
pub fn subset_from_json<S: Scalar>(space: &FiniteMetricSpace<S>, v: &Value) -> Result<PointSet> {
    let list = match v {
        Value::Array(a) => a,
        other => array_of(field(other, "points")?)?,
    };
    let idx = list.iter().map(|p| space.index_of(str_of(p)?)).collect::<Result<Vec<_>>>()?;
    PointSet::new(space.len(), idx)
}

pub fn subset_to_json<S: Scalar>(space: &FiniteMetricSpace<S>, set: &PointSet) -> Value {
    Value::Array(set.iter().map(|i| Value::String(space.name(i).to_string())).collect())
}

/// `{"root": name, "edges": [{"from": a, "to": b, "len": number}]}`.
pub fn rtree_from_json<S: Scalar>(v: &Value) -> Result<RTree<S>> {
    let root = str_of(field(v, "root")?)?;
    let edges = array_of(field(v, "edges")?)?
        .iter()
        .map(|e| {
            Ok((
                str_of(field(e, "from")?)?.to_string(),
                str_of(field(e, "to")?)?.to_string(),
                parse_num(field(e, "len")?)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    RTree::new(root, &edges)
}

pub fn rtree_to_json<S: Scalar>(t: &RTree<S>) -> Value {
    let edges: Vec<Value> = t
        .edges()
        .map(|e| json!({ "from": t.name(t.parent(e).expect("edge has a parent")), "to": t.name(e), "len": num_json(t.edge_len(e)) }))
        .collect();
    json!({ "root": t.name(0), "edges": edges })
}

/// `{"edge": [from, to], "offset": number}`; the root is `"edge": null`,
/// or any point at offset zero.
pub fn tree_point_from_json<S: Scalar>(t: &RTree<S>, v: &Value) -> Result<TreePoint<S>> {
    let offset: S = match v.get("offset") {
        Some(o) => parse_num(o)?,
        None => S::zero(),
    };
    match v.get("edge") {
        None | Some(Value::Null) => {
            if offset.is_zero() {
                Ok(TreePoint::root())
            } else {
                Err(Error::PointOffTree)
            }
        }
        Some(e) => {
            let e = array_of(e)?;
            if e.len() != 2 {
                return Err(parse_err("an edge is [from, to]"));
            }
            t.point_between(str_of(&e[0])?, str_of(&e[1])?, offset)
        }
    }
}

pub fn tree_point_to_json<S: Scalar>(t: &RTree<S>, p: &TreePoint<S>) -> Value {
    match p.edge {
        None => json!({ "edge": null, "offset": num_json(&S::zero()) }),
        Some(e) => json!({
            "edge": [t.name(t.parent(e).expect("edge has a parent")), t.name(e)],
            "offset": num_json(&p.offset),
        }),
    }
}

enum TreeTerms<S> {
    Points(Vec<(TreePoint<S>, S)>),
    Vertices(Map<String, Value>),
}

fn tree_terms<S: Scalar>(t: &RTree<S>, v: &Value) -> Result<TreeTerms<S>> {
    if let Some(c) = v.get("coeffs") {
        return Ok(TreeTerms::Vertices(object_of(c)?.clone()));
    }
    let terms = array_of(field(v, "terms")?)?
        .iter()
        .map(|term| Ok((tree_point_from_json(t, field(term, "point")?)?, parse_num(field(term, "c")?)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TreeTerms::Points(terms))
}

/// Elements on a tree, each `{"coeffs": {vertex: number}}` or
/// `{"terms": [{"point": tree_point, "c": number}]}`. The space holds every
/// vertex plus every point used; extra points are named `to@offset`.
pub fn tree_family_from_json<S: Scalar>(tree: Arc<RTree<S>>, values: &[Value]) -> Result<(Arc<TreeSpace<S>>, Vec<FreeElement<S>>)> {
    let parsed = values.iter().map(|v| tree_terms(&tree, v)).collect::<Result<Vec<_>>>()?;
    let mut named: Vec<(String, TreePoint<S>)> = (0..tree.vertex_count()).map(|v| (tree.name(v).to_string(), tree.vertex_point(v))).collect();
    for p in &parsed {
        if let TreeTerms::Points(terms) = p {
            for (pt, _) in terms {
                if !named.iter().any(|(_, q)| q == pt) {
                    let e = pt.edge.expect("the root is a vertex");
                    named.push((format!("{}@{}", tree.name(e), pt.offset), pt.clone()));
                }
            }
        }
    }
    let space = Arc::new(TreeSpace::new(tree, named)?);
    let metric = space.metric();
    let elems = parsed
        .into_iter()
        .map(|p| match p {
            TreeTerms::Vertices(map) => element_from_json(metric, &json!({ "coeffs": map })),
            TreeTerms::Points(terms) => {
                let mut mu = FreeElement::zero(metric);
                for (pt, c) in terms {
                    mu.add_at(space.index_of(&pt).expect("point was added"), c);
                }
                Ok(mu)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((space, elems))
}

/// A single element object, or an array of them.
pub fn element_list(v: &Value) -> Vec<Value> {
    match v {
        Value::Array(a) => a.clone(),
        other => vec![other.clone()],
    }
}

pub fn tree_element_to_json<S: Scalar>(space: &TreeSpace<S>, mu: &FreeElement<S>) -> Value {
    let terms: Vec<Value> = mu
        .support()
        .into_iter()
        .map(|i| json!({ "point": tree_point_to_json(space.tree(), space.point(i)), "c": num_json(mu.coeff(i)) }))
        .collect();
    json!({ "terms": terms })
}

pub fn step_to_json<S: Scalar>(g: &L1Step<S>) -> Value {
    let t = g.tree();
    let pieces: Vec<Value> = g
        .pieces()
        .filter(|p| !p.value.is_zero())
        .map(|p| {
            json!({
                "edge": [t.name(t.parent(p.edge).expect("edge has a parent")), t.name(p.edge)],
                "from": num_json(&p.from),
                "to": num_json(&p.to),
                "value": num_json(&p.value),
            })
        })
        .collect();
    Value::Array(pieces)
}
