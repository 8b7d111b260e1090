//! Input documents: one JSON container carrying an operator matrix, an
//! explicit plane curve, weight specifications, and convex regions with
//! their compact exhaustions.
//!
//! The polynomial entries use the shared text grammar over the declared
//! variable names.  Numbers that must stay exact (weight parameters, region
//! coordinates) accept JSON integers, strings like `"3/4"` or `"1.25"`
//! (read as exact decimal fractions), and floats (read as the exact binary
//! value of the double).  Unknown fields are rejected unless the caller
//! asks for lenient parsing.

use std::collections::BTreeMap;

use num_traits::{FromPrimitive, One, Signed, Zero};
use serde_json::{Map, Value};

use crate::bounds::ConvexBody;
use crate::error::{Error, Result};
use crate::linalg::QMat;
use crate::poly::{parse_polynomial, render_polynomial, Polynomial, Rat};
use crate::resolution::OperatorMatrix;
use crate::weights::WeightSpec;

/// Operator system: named variables and the matrix applied to the unknowns,
/// one row per equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemSpec {
    pub variables: Vec<String>,
    pub matrix: OperatorMatrix,
    pub label: Option<String>,
}

/// Ambient region data: a box with optionally unbounded axes, or the convex
/// hull of finitely many rational points.
#[derive(Debug, Clone, PartialEq)]
pub enum RegionKind {
    Box {
        lower: Vec<Option<Rat>>,
        upper: Vec<Option<Rat>>,
    },
    Polytope { vertices: Vec<Vec<Rat>> },
}

/// A convex region K together with its compact exhaustion rule.
///
/// Compact regions use K_α = K for every index.  A box with an unbounded
/// axis is exhausted by s_α·U ∩ K where U is the unit sub-box K ∩ [−1,1]^N
/// and s_α is the scale for index α: the explicit `scales` entry when
/// present, the index itself otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionSpec {
    pub kind: RegionKind,
    pub scales: Vec<Rat>,
    /// Polytope whose vertices span an affine subspace of dimension < N.
    pub lower_dimensional: bool,
}

impl RegionSpec {
    pub fn from_kind(kind: RegionKind, scales: Vec<Rat>) -> Result<Self> {
        let lower_dimensional = match &kind {
            RegionKind::Box { lower, upper } => {
                if lower.is_empty() {
                    return Err(Error::Input("region box must have at least one axis".into()));
                }
                if lower.len() != upper.len() {
                    return Err(Error::Input(format!(
                        "region box has {} lower bounds but {} upper bounds",
                        lower.len(),
                        upper.len()
                    )));
                }
                for (j, (lo, hi)) in lower.iter().zip(upper).enumerate() {
                    if let (Some(lo), Some(hi)) = (lo, hi) {
                        if lo > hi {
                            return Err(Error::Input(format!(
                                "region box axis {} has lower bound above upper bound",
                                j + 1
                            )));
                        }
                    }
                }
                false
            }
            RegionKind::Polytope { vertices } => {
                let Some(first) = vertices.first() else {
                    return Err(Error::Input("region polytope has no vertices".into()));
                };
                let dim = first.len();
                if dim == 0 {
                    return Err(Error::Input(
                        "region polytope vertices need at least one coordinate".into(),
                    ));
                }
                if let Some(bad) = vertices.iter().find(|v| v.len() != dim) {
                    return Err(Error::Input(format!(
                        "region polytope vertices mix dimensions {} and {}",
                        dim,
                        bad.len()
                    )));
                }
                affine_rank(vertices) < dim
            }
        };
        for s in &scales {
            if !s.is_positive() {
                return Err(Error::Input("exhaustion scales must be positive".into()));
            }
        }
        Ok(RegionSpec { kind, scales, lower_dimensional })
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            RegionKind::Box { lower, .. } => lower.len(),
            RegionKind::Polytope { vertices } => vertices[0].len(),
        }
    }

    /// Compact means every box axis is bounded; polytopes always are.
    pub fn is_compact(&self) -> bool {
        match &self.kind {
            RegionKind::Polytope { .. } => true,
            RegionKind::Box { lower, upper } => {
                lower.iter().all(Option::is_some) && upper.iter().all(Option::is_some)
            }
        }
    }

    /// Dilation factor for exhaustion index α ≥ 1.
    pub fn scale_at(&self, alpha: u32) -> Rat {
        assert!(alpha >= 1, "exhaustion indices start at 1");
        self.scales
            .get(alpha as usize - 1)
            .cloned()
            .unwrap_or_else(|| Rat::from_integer(alpha.into()))
    }

    /// The compact K_α of the exhaustion.
    pub fn body_at(&self, alpha: u32) -> Result<ConvexBody> {
        if alpha == 0 {
            return Err(Error::Input("exhaustion indices start at 1".into()));
        }
        match &self.kind {
            RegionKind::Polytope { vertices } => ConvexBody::polytope(vertices.clone()),
            RegionKind::Box { lower, upper } => {
                if self.is_compact() {
                    let lo: Vec<Rat> = lower.iter().map(|b| b.clone().unwrap()).collect();
                    let hi: Vec<Rat> = upper.iter().map(|b| b.clone().unwrap()).collect();
                    return ConvexBody::box_bounds(lo, hi);
                }
                let one = Rat::one();
                let s = self.scale_at(alpha);
                let mut lo = Vec::with_capacity(lower.len());
                let mut hi = Vec::with_capacity(lower.len());
                for (j, (l, u)) in lower.iter().zip(upper).enumerate() {
                    let unit_lo = match l {
                        Some(l) if *l > -one.clone() => l.clone(),
                        _ => -one.clone(),
                    };
                    let unit_hi = match u {
                        Some(u) if *u < one => u.clone(),
                        _ => one.clone(),
                    };
                    if unit_lo > unit_hi {
                        return Err(Error::Input(format!(
                            "region axis {} misses the unit box, so the default \
                             exhaustion is empty; give explicit scales",
                            j + 1
                        )));
                    }
                    let mut alo = &unit_lo * &s;
                    let mut ahi = &unit_hi * &s;
                    if let Some(l) = l {
                        if *l > alo {
                            alo = l.clone();
                        }
                    }
                    if let Some(u) = u {
                        if *u < ahi {
                            ahi = u.clone();
                        }
                    }
                    lo.push(alo);
                    hi.push(ahi);
                }
                ConvexBody::box_bounds(lo, hi)
            }
        }
    }
}

fn affine_rank(vertices: &[Vec<Rat>]) -> usize {
    if vertices.len() < 2 {
        return 0;
    }
    let base = &vertices[0];
    let rows: Vec<Vec<Rat>> = vertices[1..]
        .iter()
        .map(|v| v.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    QMat::from_rows(rows).rank()
}

/// Everything a run can take from one input document.
#[derive(Debug, Clone, PartialEq)]
pub struct InputDoc {
    pub label: Option<String>,
    pub variables: Vec<String>,
    pub system: Option<SystemSpec>,
    pub curve: Option<Polynomial>,
    pub weights: Vec<WeightSpec>,
    pub regions: BTreeMap<String, RegionSpec>,
}

fn object<'v>(v: &'v Value, what: &str) -> Result<&'v Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Input(format!("{what} must be a JSON object")))
}

fn array<'v>(v: &'v Value, what: &str) -> Result<&'v Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Input(format!("{what} must be a JSON array")))
}

fn string(v: &Value, what: &str) -> Result<String> {
    v.as_str()
        .map(str::to_owned)
        .ok_or_else(|| Error::Input(format!("{what} must be a JSON string")))
}

fn check_fields(map: &Map<String, Value>, allowed: &[&str], what: &str, lenient: bool) -> Result<()> {
    if lenient {
        return Ok(());
    }
    for key in map.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::Input(format!(
                "unknown field \"{key}\" in {what}; allowed fields are {}; \
                 pass --lenient to ignore",
                allowed.join(", ")
            )));
        }
    }
    Ok(())
}

/// Exact rational from a JSON value: integer, float (exact binary value),
/// or a string holding `p/q`, a decimal fraction, or an integer.
pub fn rat_from_json(v: &Value) -> Result<Rat> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rat::from_integer(i.into()))
            } else if let Some(u) = n.as_u64() {
                Ok(Rat::from_integer(u.into()))
            } else {
                let f = n.as_f64().unwrap();
                Rat::from_f64(f).ok_or_else(|| {
                    Error::Input(format!("number {f} has no finite rational value"))
                })
            }
        }
        Value::String(s) => rat_from_str(s),
        other => Err(Error::Input(format!(
            "expected a rational number, got {other}"
        ))),
    }
}

fn rat_from_str(s: &str) -> Result<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Input("empty string where a rational was expected".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: num_bigint::BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("bad numerator in rational \"{s}\"")))?;
        let d: num_bigint::BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("bad denominator in rational \"{s}\"")))?;
        if d.is_zero() {
            return Err(Error::Input(format!("zero denominator in rational \"{s}\"")));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let sign = if int_part.trim_start().starts_with('-') { -1 } else { 1 };
        let int: num_bigint::BigInt = if int_part.is_empty() || int_part == "-" || int_part == "+" {
            num_bigint::BigInt::zero()
        } else {
            int_part
                .parse()
                .map_err(|_| Error::Input(format!("bad decimal \"{s}\"")))?
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Input(format!("bad decimal \"{s}\"")));
        }
        let frac: num_bigint::BigInt = frac_part
            .parse()
            .map_err(|_| Error::Input(format!("bad decimal \"{s}\"")))?;
        let denom = num_bigint::BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = Rat::new(frac * num_bigint::BigInt::from(sign), denom);
        return Ok(Rat::from_integer(int) + frac);
    }
    let n: num_bigint::BigInt = s
        .parse()
        .map_err(|_| Error::Input(format!("cannot read \"{s}\" as a rational")))?;
    Ok(Rat::from_integer(n))
}

/// JSON value for an exact rational: an integer number when it fits in
/// i64, a `p/q` or big-integer string otherwise.
pub fn rat_to_json(r: &Rat) -> Value {
    if r.is_integer() {
        if let Ok(i) = i64::try_from(r.numer().clone()) {
            return Value::from(i);
        }
        return Value::from(r.numer().to_string());
    }
    Value::from(format!("{}/{}", r.numer(), r.denom()))
}

fn weight_from_value(v: &Value, lenient: bool) -> Result<WeightSpec> {
    let map = object(v, "a weight entry")?;
    let family = string(
        map.get("family")
            .ok_or_else(|| Error::Input("weight entry is missing \"family\"".into()))?,
        "weight family",
    )?;
    let spec = match family.as_str() {
        "gevrey" => {
            check_fields(map, &["family", "alpha"], "a gevrey weight", lenient)?;
            let alpha = rat_from_json(map.get("alpha").ok_or_else(|| {
                Error::Input("gevrey weight needs field \"alpha\"".into())
            })?)?;
            WeightSpec::Gevrey { alpha }
        }
        "logpow" => {
            check_fields(map, &["family", "beta"], "a logpow weight", lenient)?;
            let beta = rat_from_json(map.get("beta").ok_or_else(|| {
                Error::Input("logpow weight needs field \"beta\"".into())
            })?)?;
            WeightSpec::LogPow { beta }
        }
        "sublinear-log" => {
            check_fields(map, &["family", "beta"], "a sublinear-log weight", lenient)?;
            let beta = rat_from_json(map.get("beta").ok_or_else(|| {
                Error::Input("sublinear-log weight needs field \"beta\"".into())
            })?)?;
            WeightSpec::SublinearLog { beta }
        }
        "table" => {
            check_fields(map, &["family", "points"], "a table weight", lenient)?;
            let rows = array(
                map.get("points")
                    .ok_or_else(|| Error::Input("table weight needs field \"points\"".into()))?,
                "table points",
            )?;
            let mut points = Vec::with_capacity(rows.len());
            for row in rows {
                let pair = array(row, "a table point")?;
                if pair.len() != 2 {
                    return Err(Error::Input(
                        "each table point must be a [t, value] pair".into(),
                    ));
                }
                points.push((rat_from_json(&pair[0])?, rat_from_json(&pair[1])?));
            }
            WeightSpec::Table { points }
        }
        other => {
            return Err(Error::Input(format!(
                "unknown weight family \"{other}\"; expected gevrey, logpow, \
                 sublinear-log, or table"
            )))
        }
    };
    spec.validate()?;
    Ok(spec)
}

pub fn weight_to_value(w: &WeightSpec) -> Value {
    let mut map = Map::new();
    map.insert("family".into(), Value::from(w.family_name()));
    match w {
        WeightSpec::Gevrey { alpha } => {
            map.insert("alpha".into(), rat_to_json(alpha));
        }
        WeightSpec::LogPow { beta } | WeightSpec::SublinearLog { beta } => {
            map.insert("beta".into(), rat_to_json(beta));
        }
        WeightSpec::Table { points } => {
            let rows: Vec<Value> = points
                .iter()
                .map(|(t, w)| Value::Array(vec![rat_to_json(t), rat_to_json(w)]))
                .collect();
            map.insert("points".into(), Value::Array(rows));
        }
    }
    Value::Object(map)
}

fn bound_from_value(v: &Value, side_hint: &str) -> Result<Option<Rat>> {
    match v {
        Value::Null => Ok(None),
        Value::String(s) if s.trim() == "inf" || s.trim() == "+inf" => {
            if side_hint == "lower" {
                return Err(Error::Input(
                    "lower bound +inf would make the box empty; use null for an \
                     unbounded axis"
                        .into(),
                ));
            }
            Ok(None)
        }
        Value::String(s) if s.trim() == "-inf" => {
            if side_hint == "upper" {
                return Err(Error::Input(
                    "upper bound -inf would make the box empty; use null for an \
                     unbounded axis"
                        .into(),
                ));
            }
            Ok(None)
        }
        other => Ok(Some(rat_from_json(other)?)),
    }
}

fn region_from_value(v: &Value, lenient: bool) -> Result<RegionSpec> {
    let map = object(v, "a region entry")?;
    let kind = string(
        map.get("kind")
            .ok_or_else(|| Error::Input("region entry is missing \"kind\"".into()))?,
        "region kind",
    )?;
    let scales = match map.get("scales") {
        None => Vec::new(),
        Some(v) => array(v, "region scales")?
            .iter()
            .map(rat_from_json)
            .collect::<Result<Vec<Rat>>>()?,
    };
    let kind = match kind.as_str() {
        "box" => {
            check_fields(map, &["kind", "lower", "upper", "scales"], "a box region", lenient)?;
            let lower = array(
                map.get("lower")
                    .ok_or_else(|| Error::Input("box region needs field \"lower\"".into()))?,
                "box lower bounds",
            )?
            .iter()
            .map(|b| bound_from_value(b, "lower"))
            .collect::<Result<Vec<_>>>()?;
            let upper = array(
                map.get("upper")
                    .ok_or_else(|| Error::Input("box region needs field \"upper\"".into()))?,
                "box upper bounds",
            )?
            .iter()
            .map(|b| bound_from_value(b, "upper"))
            .collect::<Result<Vec<_>>>()?;
            RegionKind::Box { lower, upper }
        }
        "polytope" => {
            check_fields(map, &["kind", "vertices", "scales"], "a polytope region", lenient)?;
            let rows = array(
                map.get("vertices").ok_or_else(|| {
                    Error::Input("polytope region needs field \"vertices\"".into())
                })?,
                "polytope vertices",
            )?;
            let mut vertices = Vec::with_capacity(rows.len());
            for row in rows {
                vertices.push(
                    array(row, "a polytope vertex")?
                        .iter()
                        .map(rat_from_json)
                        .collect::<Result<Vec<Rat>>>()?,
                );
            }
            RegionKind::Polytope { vertices }
        }
        other => {
            return Err(Error::Input(format!(
                "unknown region kind \"{other}\"; expected box or polytope"
            )))
        }
    };
    RegionSpec::from_kind(kind, scales)
}

pub fn region_to_value(r: &RegionSpec) -> Value {
    let mut map = Map::new();
    match &r.kind {
        RegionKind::Box { lower, upper } => {
            map.insert("kind".into(), Value::from("box"));
            let encode = |bounds: &[Option<Rat>]| {
                Value::Array(
                    bounds
                        .iter()
                        .map(|b| b.as_ref().map_or(Value::Null, rat_to_json))
                        .collect(),
                )
            };
            map.insert("lower".into(), encode(lower));
            map.insert("upper".into(), encode(upper));
        }
        RegionKind::Polytope { vertices } => {
            map.insert("kind".into(), Value::from("polytope"));
            map.insert(
                "vertices".into(),
                Value::Array(
                    vertices
                        .iter()
                        .map(|v| Value::Array(v.iter().map(rat_to_json).collect()))
                        .collect(),
                ),
            );
        }
    }
    if !r.scales.is_empty() {
        map.insert(
            "scales".into(),
            Value::Array(r.scales.iter().map(rat_to_json).collect()),
        );
    }
    Value::Object(map)
}

fn validate_variables(variables: &[String]) -> Result<()> {
    for name in variables {
        let mut chars = name.chars();
        let head_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
        if !head_ok || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::Input(format!(
                "variable name \"{name}\" is not an identifier"
            )));
        }
    }
    for (i, name) in variables.iter().enumerate() {
        if variables[..i].contains(name) {
            return Err(Error::Input(format!("duplicate variable name \"{name}\"")));
        }
    }
    Ok(())
}

/// Parse the JSON input container.
pub fn parse_document(text: &str, lenient: bool) -> Result<InputDoc> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| Error::Input(format!("input is not valid JSON: {e}")))?;
    let map = object(&root, "the input document")?;
    check_fields(
        map,
        &["label", "variables", "matrix", "curve", "weights", "regions"],
        "the input document",
        lenient,
    )?;

    let label = match map.get("label") {
        None | Some(Value::Null) => None,
        Some(v) => Some(string(v, "label")?),
    };

    let variables: Vec<String> = match map.get("variables") {
        None => Vec::new(),
        Some(v) => array(v, "variables")?
            .iter()
            .map(|n| string(n, "a variable name"))
            .collect::<Result<Vec<_>>>()?,
    };
    validate_variables(&variables)?;

    let system = match map.get("matrix") {
        None => None,
        Some(v) => {
            if variables.is_empty() {
                return Err(Error::Input(
                    "a matrix needs a nonempty \"variables\" list".into(),
                ));
            }
            let rows = array(v, "matrix")?;
            if rows.is_empty() {
                return Err(Error::Input("matrix must have at least one row".into()));
            }
            let mut entries = Vec::with_capacity(rows.len());
            let mut width = None;
            for row in rows {
                let cells = array(row, "a matrix row")?;
                if cells.is_empty() {
                    return Err(Error::Input("matrix rows must be nonempty".into()));
                }
                match width {
                    None => width = Some(cells.len()),
                    Some(w) if w != cells.len() => {
                        return Err(Error::Input(format!(
                            "ragged matrix: rows of width {w} and {}",
                            cells.len()
                        )))
                    }
                    _ => {}
                }
                let mut parsed = Vec::with_capacity(cells.len());
                for cell in cells {
                    let src = string(cell, "a matrix entry")?;
                    parsed.push(parse_polynomial(&src, &variables)?);
                }
                entries.push(parsed);
            }
            let matrix = OperatorMatrix::new(variables.len(), entries)?;
            Some(SystemSpec {
                variables: variables.clone(),
                matrix,
                label: label.clone(),
            })
        }
    };

    let curve = match map.get("curve") {
        None => None,
        Some(v) => {
            if variables.len() != 2 {
                return Err(Error::Input(format!(
                    "an explicit curve needs exactly two variables, got {}",
                    variables.len()
                )));
            }
            let src = string(v, "curve")?;
            Some(parse_polynomial(&src, &variables)?)
        }
    };

    let weights = match map.get("weights") {
        None => Vec::new(),
        Some(v) => array(v, "weights")?
            .iter()
            .map(|w| weight_from_value(w, lenient))
            .collect::<Result<Vec<_>>>()?,
    };

    let mut regions = BTreeMap::new();
    if let Some(v) = map.get("regions") {
        let entries = object(v, "regions")?;
        check_fields(entries, &["k1", "k2"], "regions", lenient)?;
        for (key, value) in entries {
            if key == "k1" || key == "k2" {
                regions.insert(key.clone(), region_from_value(value, lenient)?);
            }
        }
    }

    Ok(InputDoc {
        label,
        variables,
        system,
        curve,
        weights,
        regions,
    })
}

/// Parse a document that must carry an operator matrix.
pub fn parse_system(text: &str) -> Result<SystemSpec> {
    let doc = parse_document(text, false)?;
    doc.system.ok_or_else(|| {
        Error::Input("document has no \"matrix\" field, so there is no system to read".into())
    })
}

/// Parse a single weight object, or a document whose first weight is taken.
pub fn parse_weight(text: &str) -> Result<WeightSpec> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| Error::Input(format!("input is not valid JSON: {e}")))?;
    if let Some(map) = root.as_object() {
        if map.contains_key("family") {
            return weight_from_value(&root, false);
        }
    }
    let doc = parse_document(text, false)?;
    doc.weights
        .into_iter()
        .next()
        .ok_or_else(|| Error::Input("document lists no weights".into()))
}

/// Canonical rendering of a parsed document; reparsing gives an equal value.
pub fn render_document(doc: &InputDoc) -> String {
    let mut map = Map::new();
    if let Some(label) = &doc.label {
        map.insert("label".into(), Value::from(label.clone()));
    }
    if !doc.variables.is_empty() {
        map.insert(
            "variables".into(),
            Value::Array(doc.variables.iter().map(|v| Value::from(v.clone())).collect()),
        );
    }
    if let Some(system) = &doc.system {
        let rows: Vec<Value> = system
            .matrix
            .entries()
            .iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|p| Value::from(render_polynomial(p, Some(&doc.variables))))
                        .collect(),
                )
            })
            .collect();
        map.insert("matrix".into(), Value::Array(rows));
    }
    if let Some(curve) = &doc.curve {
        map.insert(
            "curve".into(),
            Value::from(render_polynomial(curve, Some(&doc.variables))),
        );
    }
    if !doc.weights.is_empty() {
        map.insert(
            "weights".into(),
            Value::Array(doc.weights.iter().map(weight_to_value).collect()),
        );
    }
    if !doc.regions.is_empty() {
        let mut entries = Map::new();
        for (key, region) in &doc.regions {
            entries.insert(key.clone(), region_to_value(region));
        }
        map.insert("regions".into(), Value::Object(entries));
    }
    serde_json::to_string_pretty(&Value::Object(map)).expect("JSON map serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    fn ratq(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn gradient_system_parses_as_two_rows() {
        let doc = r#"{"variables": ["z1", "z2"], "matrix": [["z1"], ["z2"]]}"#;
        let system = parse_system(doc).unwrap();
        assert_eq!(system.matrix.rows(), 2);
        assert_eq!(system.matrix.cols(), 1);
        assert_eq!(system.variables, vec!["z1", "z2"]);
    }

    #[test]
    fn single_row_system_parses_wide() {
        let doc = r#"{"variables": ["z1", "z2"], "matrix": [["z1^2 + z2", "-1"]]}"#;
        let system = parse_system(doc).unwrap();
        assert_eq!(system.matrix.rows(), 1);
        assert_eq!(system.matrix.cols(), 2);
    }

    #[test]
    fn unknown_variable_is_a_syntax_error() {
        let doc = r#"{"variables": ["z1", "z2"], "matrix": [["z3"]]}"#;
        let err = parse_system(doc).unwrap_err();
        assert!(matches!(err, Error::Syntax { .. }), "{err}");
        assert!(err.to_string().contains("z3"), "{err}");
    }

    #[test]
    fn ragged_matrix_is_rejected() {
        let doc = r#"{"variables": ["z1"], "matrix": [["z1", "1"], ["z1"]]}"#;
        let err = parse_system(doc).unwrap_err();
        assert!(err.to_string().contains("ragged"), "{err}");
    }

    #[test]
    fn weight_families_parse_with_range_checks() {
        let w = parse_weight(r#"{"family": "gevrey", "alpha": "1/2"}"#).unwrap();
        assert_eq!(w, WeightSpec::Gevrey { alpha: ratq(1, 2) });

        let w = parse_weight(r#"{"family": "logpow", "beta": 1}"#).unwrap();
        assert_eq!(w.gamma_note(), Some("satisfies (gamma)' but not (gamma)"));

        let err = parse_weight(r#"{"family": "gevrey", "alpha": 1}"#).unwrap_err();
        assert!(matches!(err, Error::Range(_)), "{err}");
        assert!(err.to_string().contains("0 < alpha < 1"), "{err}");

        let err = parse_weight(r#"{"family": "planck"}"#).unwrap_err();
        assert!(err.to_string().contains("unknown weight family"), "{err}");
    }

    #[test]
    fn rational_encodings_are_exact() {
        assert_eq!(rat_from_json(&serde_json::json!(3)).unwrap(), rat(3));
        assert_eq!(rat_from_json(&serde_json::json!("3/4")).unwrap(), ratq(3, 4));
        assert_eq!(rat_from_json(&serde_json::json!("1.25")).unwrap(), ratq(5, 4));
        assert_eq!(rat_from_json(&serde_json::json!("-0.1")).unwrap(), ratq(-1, 10));
        assert_eq!(rat_from_json(&serde_json::json!(0.5)).unwrap(), ratq(1, 2));
        assert!(rat_from_json(&serde_json::json!("1/0")).is_err());
        assert!(rat_from_json(&serde_json::json!("abc")).is_err());
    }

    #[test]
    fn regions_parse_with_exhaustions() {
        let doc = r#"{
            "regions": {
                "k1": {"kind": "box", "lower": [-1, -1], "upper": [1, 1]},
                "k2": {"kind": "box", "lower": [null, -1], "upper": [null, 1], "scales": [1, "3/2"]}
            }
        }"#;
        let parsed = parse_document(doc, false).unwrap();
        let k1 = &parsed.regions["k1"];
        assert!(k1.is_compact());
        assert_eq!(k1.body_at(1).unwrap(), k1.body_at(5).unwrap());

        let k2 = &parsed.regions["k2"];
        assert!(!k2.is_compact());
        let b1 = k2.body_at(1).unwrap();
        let ConvexBody::Box { lower, upper } = &b1 else { panic!("expected a box") };
        assert_eq!(lower, &vec![rat(-1), rat(-1)]);
        assert_eq!(upper, &vec![rat(1), rat(1)]);
        let b2 = k2.body_at(2).unwrap();
        let ConvexBody::Box { lower, upper } = &b2 else { panic!("expected a box") };
        assert_eq!(lower, &vec![ratq(-3, 2), rat(-1)]);
        assert_eq!(upper, &vec![ratq(3, 2), rat(1)]);
        let b9 = k2.body_at(9).unwrap();
        let ConvexBody::Box { lower, .. } = &b9 else { panic!("expected a box") };
        assert_eq!(lower, &vec![rat(-9), rat(-1)]);
    }

    #[test]
    fn flat_polytopes_are_flagged_lower_dimensional() {
        let doc = r#"{
            "regions": {
                "k1": {"kind": "polytope", "vertices": [[-1, 0], [1, 0]]},
                "k2": {"kind": "polytope", "vertices": [[0, 0], [1, 0], [0, 1]]}
            }
        }"#;
        let parsed = parse_document(doc, false).unwrap();
        assert!(parsed.regions["k1"].lower_dimensional);
        assert!(!parsed.regions["k2"].lower_dimensional);
    }

    #[test]
    fn unknown_fields_are_rejected_unless_lenient() {
        let doc = r#"{"variables": ["z1"], "curvature": 1}"#;
        let err = parse_document(doc, false).unwrap_err();
        assert!(err.to_string().contains("curvature"), "{err}");
        assert!(parse_document(doc, true).is_ok());

        let weight = r#"{"family": "gevrey", "alpha": "1/2", "units": "eV"}"#;
        assert!(parse_weight(weight).is_err());
    }

    #[test]
    fn curve_requires_two_variables() {
        let doc = r#"{"variables": ["z1"], "curve": "z1"}"#;
        let err = parse_document(doc, false).unwrap_err();
        assert!(err.to_string().contains("two variables"), "{err}");

        let doc = r#"{"variables": ["z1", "z2"], "curve": "z2^2 - z1^3"}"#;
        let parsed = parse_document(doc, false).unwrap();
        assert_eq!(parsed.curve.unwrap().to_text(), "-z1^3 + z2^2");
    }

    #[test]
    fn duplicate_and_bad_variable_names_are_rejected() {
        let doc = r#"{"variables": ["z1", "z1"]}"#;
        assert!(parse_document(doc, false).is_err());
        let doc = r#"{"variables": ["2z"]}"#;
        assert!(parse_document(doc, false).is_err());
    }

    #[test]
    fn full_document_round_trips() {
        let doc = r#"{
            "label": "demo",
            "variables": ["z1", "z2"],
            "matrix": [["z1"], ["z2"]],
            "curve": "z2^2 - z1^3",
            "weights": [
                {"family": "gevrey", "alpha": "1/2"},
                {"family": "table", "points": [[1, 0], [10, "3/2"]]}
            ],
            "regions": {
                "k1": {"kind": "box", "lower": [-1, -1], "upper": [1, 1]},
                "k2": {"kind": "polytope", "vertices": [[0, 0], [2, 0], [0, 2]], "scales": [2]}
            }
        }"#;
        let parsed = parse_document(doc, false).unwrap();
        let rendered = render_document(&parsed);
        let reparsed = parse_document(&rendered, false).unwrap();
        assert_eq!(parsed, reparsed);
        assert_eq!(rendered, render_document(&reparsed));
    }

    proptest! {
        #[test]
        fn parser_never_panics_on_arbitrary_input(text in "\\PC*") {
            let _ = parse_document(&text, false);
            let _ = parse_document(&text, true);
            let _ = parse_system(&text);
            let _ = parse_weight(&text);
        }

        #[test]
        fn parser_never_panics_on_jsonish_input(
            label in "[a-z]{0,8}",
            n in 0usize..4,
            entry in "[-+*^ z0-9()]{0,16}",
            num in "[-0-9./]{0,8}",
        ) {
            let vars: Vec<String> = (1..=n).map(|i| format!("z{i}")).collect();
            let doc = format!(
                r#"{{"label": "{label}", "variables": {}, "matrix": [[{}]], "weights": [{{"family": "gevrey", "alpha": "{num}"}}]}}"#,
                serde_json::to_string(&vars).unwrap(),
                serde_json::to_string(&entry).unwrap(),
            );
            let _ = parse_document(&doc, false);
            let _ = parse_document(&doc, true);
        }
    }
}
