//! JSON documents for complexes, simplicial modules, algebras and tables.

use num_bigint::BigInt;
use serde::ser::{SerializeSeq, Serializer};
use serde_json::Value;

use serde_json::json;

use crate::algebra::CommAlgebra;
use crate::chain::{checked_complex, ChainComplex};
use crate::coefficients::{RingSpec, Scalar};
use crate::divpow::{free_divided_power, GammaTable, GradedAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{BasedModule, Matrix};
use crate::simplicial::{verify_simplicial, SimplicialModule};

/// Scalars go out as JSON numbers when they fit in an `i64`, else as strings.
pub fn scalar_to_json(x: &Scalar) -> Value {
    let text = x.to_string();
    match text.parse::<i64>() {
        Ok(n) => Value::from(n),
        Err(_) => Value::from(text),
    }
}

pub fn scalar_from_json(ring: RingSpec, v: &Value) -> Result<Scalar> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(ring.from_i64(i)),
            None => ring.parse_scalar(&n.to_string()),
        },
        Value::String(s) => ring.parse_scalar(s),
        other => Err(Error::Parse(format!("expected a number or string, got {other}"))),
    }
}

pub fn vector_to_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar_to_json).collect())
}

pub fn vector_from_json(ring: RingSpec, v: &Value) -> Result<Vec<Scalar>> {
    let items = v.as_array().ok_or_else(|| Error::Parse(format!("expected a list, got {v}")))?;
    items.iter().map(|x| scalar_from_json(ring, x)).collect()
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_to_json(m.row(i))).collect())
}

/// Row-major nested lists; the shape is given because empty matrices carry no rows.
pub fn matrix_from_json(ring: RingSpec, rows: usize, cols: usize, v: &Value) -> Result<Matrix> {
    let items = v.as_array().ok_or_else(|| Error::Parse(format!("expected a matrix, got {v}")))?;
    let mut entries = Vec::with_capacity(items.len());
    for r in items {
        entries.push(vector_from_json(ring, r)?);
    }
    if rows == 0 && entries.is_empty() {
        return Ok(Matrix::zeros(ring, 0, cols));
    }
    Matrix::from_rows(ring, rows, cols, entries)
}

pub fn ring_from_json(v: &Value) -> Result<RingSpec> {
    v.get("ring")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("missing \"ring\"".into()))?
        .parse()
}

pub fn usize_list(v: &Value, key: &str) -> Result<Vec<usize>> {
    v.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse(format!("missing list {key:?}")))?
        .iter()
        .map(|x| x.as_u64().map(|n| n as usize).ok_or_else(|| Error::Parse(format!("bad entry in {key:?}: {x}"))))
        .collect()
}

pub(crate) fn ser_bigints<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&scalar_to_json(&Scalar::Int(x.clone())))?;
    }
    seq.end()
}

pub(crate) fn ser_vectors<S: Serializer>(v: &[Vec<Scalar>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&vector_to_json(x))?;
    }
    seq.end()
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing {key:?}")))
}

fn list<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    field(v, key)?.as_array().ok_or_else(|| Error::Parse(format!("{key:?} must be a list")))
}

fn count(v: &Value, key: &str) -> Result<usize> {
    field(v, key)?.as_u64().map(|n| n as usize).ok_or_else(|| Error::Parse(format!("{key:?} must be a count")))
}

/// `{ring, ranks, differentials}`; `differentials[k]` is `d_{k+1}: C_{k+1} -> C_k`.
pub fn complex_from_json(v: &Value) -> Result<ChainComplex> {
    let ring = ring_from_json(v)?;
    let ranks = usize_list(v, "ranks")?;
    if ranks.is_empty() {
        return Err(Error::Parse("\"ranks\" is empty".into()));
    }
    let ds = list(v, "differentials")?;
    if ds.len() + 1 != ranks.len() {
        return Err(Error::Parse(format!("{} ranks need {} differentials, got {}", ranks.len(), ranks.len() - 1, ds.len())));
    }
    let mats = ds
        .iter()
        .enumerate()
        .map(|(k, d)| matrix_from_json(ring, ranks[k], ranks[k + 1], d))
        .collect::<Result<Vec<_>>>()?;
    checked_complex(ChainComplex::from_matrices(ring, &ranks, mats)?)
}

pub fn complex_to_json(c: &ChainComplex) -> Value {
    json!({
        "ring": c.ring.to_string(),
        "ranks": c.ranks(),
        "differentials": (1..=c.top()).map(|n| matrix_to_json(&c.d(n))).collect::<Vec<_>>(),
    })
}

/// `{ring, truncation, ranks, faces, degeneracies}`; `faces[n]` lists `d_0..d_n` on level `n`
/// (empty for level 0) and `degeneracies[n]` lists `s_0..s_n` out of level `n`.
pub fn simplicial_from_json(v: &Value) -> Result<SimplicialModule> {
    let ring = ring_from_json(v)?;
    let l = count(v, "truncation")?;
    let ranks = usize_list(v, "ranks")?;
    if ranks.len() != l + 1 {
        return Err(Error::Parse(format!("truncation {l} needs {} ranks", l + 1)));
    }
    let faces = list(v, "faces")?;
    let degs = list(v, "degeneracies")?;
    if faces.len() != l + 1 || degs.len() != l {
        return Err(Error::Parse(format!("truncation {l} needs {} face levels and {l} degeneracy levels", l + 1)));
    }
    let mut face_mats = Vec::with_capacity(l + 1);
    for (n, level) in faces.iter().enumerate() {
        let level = level.as_array().ok_or_else(|| Error::Parse(format!("faces of level {n} must be a list")))?;
        let rows = if n == 0 { 0 } else { ranks[n - 1] };
        face_mats.push(level.iter().map(|m| matrix_from_json(ring, rows, ranks[n], m)).collect::<Result<Vec<_>>>()?);
    }
    let mut deg_mats = Vec::with_capacity(l);
    for (n, level) in degs.iter().enumerate() {
        let level = level.as_array().ok_or_else(|| Error::Parse(format!("degeneracies of level {n} must be a list")))?;
        deg_mats.push(level.iter().map(|m| matrix_from_json(ring, ranks[n + 1], ranks[n], m)).collect::<Result<Vec<_>>>()?);
    }
    let levels = ranks.iter().enumerate().map(|(n, &r)| BasedModule::numbered(ring, r, &format!("x{n}_"))).collect();
    let x = SimplicialModule::new(ring, levels, face_mats, deg_mats)?;
    if let Some(bad) = verify_simplicial(&x).first() {
        return Err(Error::Parse(format!("simplicial identity fails: {bad}")));
    }
    Ok(x)
}

pub fn simplicial_to_json(x: &SimplicialModule) -> Value {
    json!({
        "ring": x.ring.to_string(),
        "truncation": x.truncation(),
        "ranks": x.ranks(),
        "faces": x.faces.iter().map(|l| l.iter().map(matrix_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "degeneracies": x.degeneracies.iter().map(|l| l.iter().map(matrix_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

/// `{ring, dim, unit, mul}` with `mul[i][j]` the coordinates of `e_i e_j`.
pub fn make_algebra(v: &Value) -> Result<CommAlgebra> {
    let ring = ring_from_json(v)?;
    let dim = count(v, "dim")?;
    let unit = vector_from_json(ring, field(v, "unit")?)?;
    if unit.len() != dim {
        return Err(Error::Parse(format!("unit has {} entries, dim is {dim}", unit.len())));
    }
    let mul = list(v, "mul")?;
    if mul.len() != dim {
        return Err(Error::Parse(format!("\"mul\" needs {dim} rows")));
    }
    let mut constants = Vec::with_capacity(dim);
    for row in mul {
        let row = row.as_array().ok_or_else(|| Error::Parse("rows of \"mul\" must be lists".into()))?;
        if row.len() != dim {
            return Err(Error::Parse(format!("rows of \"mul\" need {dim} entries")));
        }
        let entries = row
            .iter()
            .map(|e| {
                let e = vector_from_json(ring, e)?;
                if e.len() == dim {
                    Ok(e)
                } else {
                    Err(Error::Parse(format!("products need {dim} coordinates")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        constants.push(entries);
    }
    CommAlgebra::new(ring, unit, constants)
}

pub fn algebra_to_json(a: &CommAlgebra) -> Value {
    let mul: Vec<Vec<Value>> = (0..a.dim)
        .map(|i| (0..a.dim).map(|j| vector_to_json(&(0..a.dim).map(|k| a.structure_constant(i, j, k)).collect::<Vec<_>>())).collect())
        .collect();
    json!({"ring": a.ring.to_string(), "dim": a.dim, "unit": vector_to_json(&a.unit), "mul": mul})
}

/// A graded algebra, in one of the forms
///
/// - `{ring, degree_bound, polynomial: {label, degree}}`
/// - `{ring, degree_bound, exterior: {label, degree}}`
/// - `{ring, degree_bound, generators: [[label, degree], ..]}`, the free divided power algebra
/// - `{ring, components: [[label, ..] per degree], products: [[left, right, coordinates], ..]}`
///
/// In the explicit form products with the degree 0 basis element are scalar
/// multiplication and unlisted products are zero.
pub fn graded_algebra_from_json(v: &Value) -> Result<GradedAlgebra> {
    let ring = ring_from_json(v)?;
    let generator = |g: &Value| -> Result<(String, usize)> {
        let label = field(g, "label")?.as_str().ok_or_else(|| Error::Parse("label must be a string".into()))?;
        Ok((label.to_string(), count(g, "degree")?))
    };
    if let Some(g) = v.get("polynomial") {
        let (label, degree) = generator(g)?;
        return GradedAlgebra::polynomial(ring, &label, degree, count(v, "degree_bound")?);
    }
    if let Some(g) = v.get("exterior") {
        let (label, degree) = generator(g)?;
        if degree % 2 == 0 {
            return Err(Error::Parse("exterior generators need odd degree".into()));
        }
        return Ok(GradedAlgebra::exterior(ring, &label, degree, count(v, "degree_bound")?));
    }
    if v.get("generators").is_some() {
        return Ok(free_divided_power(&generators_from_json(v)?, ring, count(v, "degree_bound")?)?.0);
    }
    let comps = list(v, "components")?;
    let components = comps
        .iter()
        .map(|c| {
            let labels = c
                .as_array()
                .ok_or_else(|| Error::Parse("components must be lists of labels".into()))?
                .iter()
                .map(|l| l.as_str().map(str::to_string).ok_or_else(|| Error::Parse("labels must be strings".into())))
                .collect::<Result<Vec<_>>>()?;
            BasedModule::new(ring, labels)
        })
        .collect::<Result<Vec<_>>>()?;
    if components.first().map(BasedModule::rank) != Some(1) {
        return Err(Error::Parse("degree 0 must have exactly one basis element".into()));
    }
    let find = |label: &str| -> Result<(usize, usize)> {
        components
            .iter()
            .enumerate()
            .find_map(|(n, c)| c.labels.iter().position(|l| l == label).map(|k| (n, k)))
            .ok_or_else(|| Error::Parse(format!("unknown label {label:?}")))
    };
    let mut table = std::collections::HashMap::new();
    for entry in list(v, "products").map(|x| x.as_slice()).unwrap_or(&[]) {
        let e = entry.as_array().filter(|e| e.len() == 3).ok_or_else(|| Error::Parse("products are [left, right, value]".into()))?;
        let name = |x: &Value| x.as_str().map(str::to_string).ok_or_else(|| Error::Parse("product factors are labels".into()));
        let (a, b) = (find(&name(&e[0])?)?, find(&name(&e[1])?)?);
        if a.0 + b.0 >= components.len() {
            return Err(Error::Parse(format!("product {} * {} is beyond the degree bound", e[0], e[1])));
        }
        let value = vector_from_json(ring, &e[2])?;
        if value.len() != components[a.0 + b.0].rank() {
            return Err(Error::Parse(format!("product {} * {} needs {} coordinates", e[0], e[1], components[a.0 + b.0].rank())));
        }
        table.insert((a, b), value);
    }
    let ranks: Vec<usize> = components.iter().map(BasedModule::rank).collect();
    GradedAlgebra::from_rule(ring, components, |p, i, q, j| {
        if p == 0 {
            return crate::linalg::unit_vector(ring, ranks[q], j);
        }
        if q == 0 {
            return crate::linalg::unit_vector(ring, ranks[p], i);
        }
        table.get(&((p, i), (q, j))).cloned().unwrap_or_else(|| vec![ring.zero(); ranks[p + q]])
    })
}

pub fn generators_from_json(v: &Value) -> Result<Vec<(String, usize)>> {
    list(v, "generators")?
        .iter()
        .map(|g| {
            let pair = g.as_array().filter(|p| p.len() == 2);
            match pair.map(|p| (p[0].as_str(), p[1].as_u64())) {
                Some((Some(l), Some(d))) => Ok((l.to_string(), d as usize)),
                _ => Err(Error::Parse(format!("generators are [label, degree] pairs, got {g}"))),
            }
        })
        .collect()
}

pub fn graded_algebra_to_json(a: &GradedAlgebra) -> Value {
    let mut products = Vec::new();
    for p in 1..=a.degree_bound {
        for q in 1..=a.degree_bound - p {
            let m = a.mult_matrix(p, q);
            for i in 0..a.rank(p) {
                for j in 0..a.rank(q) {
                    let col = m.column(i * a.rank(q) + j);
                    if col.iter().any(|x| !a.ring.is_zero(x)) {
                        products.push(json!([a.label(p, i), a.label(q, j), vector_to_json(&col)]));
                    }
                }
            }
        }
    }
    json!({
        "ring": a.ring.to_string(),
        "components": a.components.iter().map(|c| c.labels.clone()).collect::<Vec<_>>(),
        "products": products,
    })
}

/// `{label: {i: coordinates}}` over the basis labels of `alg`.
pub fn gamma_table_from_json(alg: &GradedAlgebra, v: &Value) -> Result<GammaTable> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("a gamma table is an object keyed by labels".into()))?;
    let mut table = GammaTable::new();
    for (label, values) in obj {
        let (n, k) = alg.find_label(label).ok_or_else(|| Error::Parse(format!("unknown label {label:?}")))?;
        let values = values.as_object().ok_or_else(|| Error::Parse(format!("values of {label:?} must be an object")))?;
        for (i, x) in values {
            let i: usize = i.parse().map_err(|_| Error::Parse(format!("bad index {i:?} for {label:?}")))?;
            if n * i > alg.degree_bound {
                return Err(Error::Parse(format!("gamma_{i}({label}) is beyond the degree bound")));
            }
            let x = vector_from_json(alg.ring, x)?;
            if x.len() != alg.rank(n * i) {
                return Err(Error::Parse(format!("gamma_{i}({label}) needs {} coordinates", alg.rank(n * i))));
            }
            table.set(n, k, i, x);
        }
    }
    Ok(table)
}

pub fn gamma_table_to_json(alg: &GradedAlgebra, t: &GammaTable) -> Value {
    let mut out = serde_json::Map::new();
    for (&(n, k, i), x) in t.entries() {
        let slot = out.entry(alg.label(n, k).to_string()).or_insert_with(|| json!({}));
        slot[i.to_string()] = vector_to_json(x);
    }
    Value::Object(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::standard_simplex_module;

    #[test]
    fn round_trips() {
        let z = RingSpec::Integers;
        let x = standard_simplex_module(1, z, 3);
        let back = simplicial_from_json(&simplicial_to_json(&x)).unwrap();
        assert_eq!(back.faces, x.faces);
        assert_eq!(back.degeneracies, x.degeneracies);

        let c = crate::doldkan::normalize(&x).unwrap();
        let c2 = complex_from_json(&complex_to_json(&c)).unwrap();
        assert_eq!(c2.ranks(), c.ranks());
        assert_eq!(c2.d(1), c.d(1));

        let f2 = RingSpec::integers_mod(2).unwrap();
        let a = CommAlgebra::truncated_polynomial(f2, 2);
        let a2 = make_algebra(&algebra_to_json(&a)).unwrap();
        assert_eq!((a2.dim, a2.unit.clone()), (2, a.unit.clone()));
        assert_eq!(a2.structure_constant(1, 1, 0), a.structure_constant(1, 1, 0));

        let (g, t) = free_divided_power(&[("x".into(), 2)], z, 6).unwrap();
        let g2 = graded_algebra_from_json(&graded_algebra_to_json(&g)).unwrap();
        assert_eq!(g2.mult_matrix(2, 4), g.mult_matrix(2, 4));
        let t2 = gamma_table_from_json(&g2, &gamma_table_to_json(&g, &t)).unwrap();
        assert_eq!(t2, t);
    }

    #[test]
    fn rejects_bad_documents() {
        let bad_complex = json!({"ring": "Z", "ranks": [1, 1, 1], "differentials": [[[1]], [[1]]]});
        assert!(matches!(complex_from_json(&bad_complex), Err(Error::NotAComplex(_))));
        let bad_algebra = json!({"ring": "Z", "dim": 1, "unit": [2], "mul": [[[1]]]});
        assert!(make_algebra(&bad_algebra).is_err());
        assert!(ring_from_json(&json!({"ring": "R"})).is_err());
    }
}
