//! Spec files: a TOML tree of parameters, checked against a per-kind schema,
//! plus an optional `[sweep]` table of grid axes.
//!
//! Parameters are addressed by dotted paths such as `fiber.length_m`.
//! Dimensional keys carry their unit as a suffix (`_au`, `_fs`, `_m`,
//! `_per_m`, `_rad`).

use std::collections::BTreeMap;

use enantio::three_level::Vec3;
use enantio::Complex64;
use serde_json::Value as Json;
use toml::Value;

use crate::error::{CliError, ValidationReport};

/// Value type of a parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Ty {
    Float,
    /// Non-negative integer.
    Int,
    Bool,
    Choice(&'static [&'static str]),
    FloatList,
    /// Three entries, each a number or a `[re, im]` pair.
    Vec3,
}

/// Whether a parameter must be given.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Presence {
    Required,
    Optional,
    /// TOML literal used when the key is absent.
    Default(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Field {
    pub key: &'static str,
    pub ty: Ty,
    pub presence: Presence,
}

pub const fn req(key: &'static str, ty: Ty) -> Field {
    Field { key, ty, presence: Presence::Required }
}

pub const fn opt(key: &'static str, ty: Ty) -> Field {
    Field { key, ty, presence: Presence::Optional }
}

pub const fn def(key: &'static str, ty: Ty, literal: &'static str) -> Field {
    Field { key, ty, presence: Presence::Default(literal) }
}

/// One sweep axis.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub key: String,
    pub values: Vec<f64>,
}

/// Resolved parameters, defaults included.
#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    values: BTreeMap<String, Value>,
}

fn as_f64(v: &Value) -> Option<f64> {
    match v {
        Value::Float(x) => Some(*x),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

impl Params {
    fn get(&self, key: &str) -> &Value {
        self.values.get(key).unwrap_or_else(|| panic!("parameter {key} not in schema"))
    }

    pub fn f64(&self, key: &str) -> f64 {
        as_f64(self.get(key)).expect("validated float")
    }

    pub fn usize(&self, key: &str) -> usize {
        match self.get(key) {
            Value::Integer(i) => *i as usize,
            _ => panic!("validated integer {key}"),
        }
    }

    pub fn bool(&self, key: &str) -> bool {
        self.get(key).as_bool().expect("validated bool")
    }

    pub fn str(&self, key: &str) -> &str {
        self.get(key).as_str().expect("validated string")
    }

    pub fn floats(&self, key: &str) -> Vec<f64> {
        self.get(key).as_array().expect("validated list").iter().filter_map(as_f64).collect()
    }

    /// `None` when an optional vector is absent.
    pub fn vec3(&self, key: &str) -> Option<Vec3> {
        self.values.get(key).map(|v| parse_vec3(v).expect("validated vector"))
    }

    /// Copy with float parameters replaced.
    pub fn with_overrides(&self, overrides: &[(String, f64)]) -> Self {
        let mut values = self.values.clone();
        for (k, v) in overrides {
            values.insert(k.clone(), Value::Float(*v));
        }
        Self { values }
    }

    pub fn to_json(&self) -> Json {
        Json::Object(self.values.iter().map(|(k, v)| (k.clone(), toml_to_json(v))).collect())
    }
}

fn toml_to_json(v: &Value) -> Json {
    match v {
        Value::String(s) => Json::from(s.clone()),
        Value::Integer(i) => Json::from(*i),
        Value::Float(x) => Json::from(*x),
        Value::Boolean(b) => Json::from(*b),
        Value::Datetime(d) => Json::from(d.to_string()),
        Value::Array(a) => Json::Array(a.iter().map(toml_to_json).collect()),
        Value::Table(t) => Json::Object(t.iter().map(|(k, v)| (k.clone(), toml_to_json(v))).collect()),
    }
}

fn parse_vec3(v: &Value) -> Option<Vec3> {
    let a = v.as_array()?;
    if a.len() != 3 {
        return None;
    }
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for (slot, e) in out.iter_mut().zip(a) {
        *slot = match e {
            Value::Array(p) if p.len() == 2 => Complex64::new(as_f64(&p[0])?, as_f64(&p[1])?),
            other => Complex64::new(as_f64(other)?, 0.0),
        };
    }
    Some(out)
}

fn type_error(ty: Ty, v: &Value) -> Option<String> {
    let ok = match ty {
        Ty::Float => as_f64(v).is_some_and(f64::is_finite),
        Ty::Int => matches!(v, Value::Integer(i) if *i >= 0),
        Ty::Bool => v.is_bool(),
        Ty::Choice(options) => v.as_str().is_some_and(|s| options.contains(&s)),
        Ty::FloatList => v
            .as_array()
            .is_some_and(|a| !a.is_empty() && a.iter().all(|x| as_f64(x).is_some_and(f64::is_finite))),
        Ty::Vec3 => parse_vec3(v).is_some(),
    };
    if ok {
        return None;
    }
    Some(match ty {
        Ty::Float => "expected a finite number".into(),
        Ty::Int => "expected a non-negative integer".into(),
        Ty::Bool => "expected true or false".into(),
        Ty::Choice(options) => format!("expected one of {options:?}"),
        Ty::FloatList => "expected a non-empty list of finite numbers".into(),
        Ty::Vec3 => "expected three numbers or [re, im] pairs".into(),
    })
}

fn flatten(prefix: &str, table: &toml::Table, out: &mut BTreeMap<String, Value>) {
    for (k, v) in table {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match v {
            Value::Table(t) => flatten(&key, t, out),
            other => {
                out.insert(key, other.clone());
            }
        }
    }
}

fn is_axis(t: &toml::Table) -> bool {
    t.contains_key("values") || t.contains_key("start")
}

fn collect_axes(prefix: &str, table: &toml::Table, out: &mut Vec<(String, toml::Table)>, report: &mut ValidationReport) {
    for (k, v) in table {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match v {
            Value::Table(t) if is_axis(t) => out.push((key, t.clone())),
            Value::Table(t) => collect_axes(&key, t, out, report),
            _ => report.invalid.push((format!("sweep.{key}"), "expected {values = [...]} or {start, stop, points}".into())),
        }
    }
}

fn parse_axis(key: &str, t: &toml::Table) -> Result<Vec<f64>, String> {
    if let Some(v) = t.get("values") {
        if t.len() != 1 {
            return Err("`values` cannot be combined with other axis keys".into());
        }
        let list = v.as_array().ok_or("`values` must be a list")?;
        let values: Option<Vec<f64>> = list.iter().map(as_f64).collect();
        let values = values.ok_or("`values` must hold numbers")?;
        if values.is_empty() || values.iter().any(|x| !x.is_finite()) {
            return Err("`values` must be non-empty and finite".into());
        }
        return Ok(values);
    }
    let allowed = ["start", "stop", "points"];
    if let Some(extra) = t.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(format!("unknown axis key `{extra}` for {key}"));
    }
    let start = t.get("start").and_then(as_f64).ok_or("`start` must be a number")?;
    let stop = t.get("stop").and_then(as_f64).ok_or("`stop` must be a number")?;
    let points = match t.get("points") {
        Some(Value::Integer(n)) if *n >= 1 => *n as usize,
        _ => return Err("`points` must be a positive integer".into()),
    };
    if !(start.is_finite() && stop.is_finite()) {
        return Err("axis bounds must be finite".into());
    }
    if points == 1 {
        return Ok(vec![start]);
    }
    Ok((0..points).map(|i| start + (stop - start) * i as f64 / (points - 1) as f64).collect())
}

/// Checks `tree` against `schema` and resolves defaults.
///
/// A top-level `kind` string, when present, must equal `kind`. Keys given
/// as sweep axes count as present.
pub fn validate(schema: &[Field], kind: &str, tree: &toml::Table) -> Result<(Params, Vec<Axis>), CliError> {
    let mut report = ValidationReport::default();
    let mut tree = tree.clone();
    if let Some(k) = tree.remove("kind") {
        if k.as_str() != Some(kind) {
            report.invalid.push(("kind".into(), format!("spec declares {k}, command line asks for {kind}")));
        }
    }
    let sweep = match tree.remove("sweep") {
        Some(Value::Table(t)) => Some(t),
        Some(_) => {
            report.invalid.push(("sweep".into(), "expected a table".into()));
            None
        }
        None => None,
    };
    let mut given = BTreeMap::new();
    flatten("", &tree, &mut given);

    let field = |key: &str| schema.iter().find(|f| f.key == key);
    let mut axes = Vec::new();
    if let Some(sweep) = sweep {
        let mut raw = Vec::new();
        collect_axes("", &sweep, &mut raw, &mut report);
        for (key, t) in raw {
            match field(&key) {
                Some(f) if f.ty == Ty::Float => match parse_axis(&key, &t) {
                    Ok(values) => axes.push(Axis { key, values }),
                    Err(m) => report.invalid.push((format!("sweep.{key}"), m)),
                },
                Some(_) => report.invalid.push((format!("sweep.{key}"), "only float parameters can be swept".into())),
                None => report.unknown.push(format!("sweep.{key}")),
            }
        }
    }

    let mut values = BTreeMap::new();
    for (key, v) in &given {
        match field(key) {
            Some(f) => match type_error(f.ty, v) {
                Some(m) => report.invalid.push((key.clone(), m)),
                None => {
                    values.insert(key.clone(), v.clone());
                }
            },
            None => report.unknown.push(key.clone()),
        }
    }
    for f in schema {
        if given.contains_key(f.key) {
            continue;
        }
        let swept = axes.iter().find(|a| a.key == f.key);
        match (f.presence, swept) {
            (_, Some(a)) => {
                values.insert(f.key.to_string(), Value::Float(a.values[0]));
            }
            (Presence::Required, None) => report.missing.push(f.key.to_string()),
            (Presence::Optional, None) => {}
            (Presence::Default(lit), None) => {
                let parsed: toml::Table = format!("v = {lit}").parse().expect("schema default literal");
                values.insert(f.key.to_string(), parsed["v"].clone());
            }
        }
    }
    if report.is_empty() {
        Ok((Params { values }, axes))
    } else {
        Err(CliError::Validation(report))
    }
}

/// Cartesian product of the axes, first axis slowest.
pub fn grid(axes: &[Axis]) -> Vec<Vec<(String, f64)>> {
    let mut points: Vec<Vec<(String, f64)>> = vec![Vec::new()];
    for axis in axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push((axis.key.clone(), *v));
                    q
                })
            })
            .collect();
    }
    points
}
