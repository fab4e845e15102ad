//! JSON documents for systems, generators and certificates, plus the
//! deterministic emitter used for every machine-readable output.
//!
//! Numbers are written with 17 significant digits, complex scalars as
//! `[re, im]`, and each matrix row on one line.

use crate::error::{Error, Result};
use crate::linalg::{c64, jordan_block, Matrix, C64};
use crate::moments::MomentVector;
use crate::reduction::{CertificateKind, MatchCertificate, ReducedModel};
use crate::systems::{DescriptorModel, Generator, GeneratorLeft, GeneratorRight, LtiSystem, PortHamiltonianSystem};
use crate::verification::VerificationReport;
use serde_json::Value;

/// Output tree with a fixed key order.
#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    /// Array always printed on one line.
    Row(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl Json {
    pub fn obj(fields: Vec<(&str, Json)>) -> Json {
        Json::Obj(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    pub fn str(s: &str) -> Json {
        Json::Str(s.to_string())
    }

    pub fn scalar(z: C64) -> Json {
        if z.im == 0.0 {
            Json::Num(z.re)
        } else {
            Json::Row(vec![Json::Num(z.re), Json::Num(z.im)])
        }
    }

    pub fn matrix(m: &Matrix) -> Json {
        Json::Arr((0..m.nrows()).map(|i| Json::Row((0..m.ncols()).map(|j| Json::scalar(m[(i, j)])).collect())).collect())
    }

    /// Pretty text with two-space indentation and a trailing newline.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Num(x) => out.push_str(&fmt_num(*x)),
            Json::Str(s) => out.push_str(&Value::String(s.clone()).to_string()),
            Json::Row(items) => {
                out.push('[');
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    it.write(out, indent);
                }
                out.push(']');
            }
            Json::Arr(items) if items.is_empty() => out.push_str("[]"),
            Json::Arr(items) => {
                out.push_str("[\n");
                for (i, it) in items.iter().enumerate() {
                    pad(out, indent + 1);
                    it.write(out, indent + 1);
                    out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
                }
                pad(out, indent);
                out.push(']');
            }
            Json::Obj(fields) if fields.is_empty() => out.push_str("{}"),
            Json::Obj(fields) => {
                out.push_str("{\n");
                for (i, (k, v)) in fields.iter().enumerate() {
                    pad(out, indent + 1);
                    out.push_str(&Value::String(k.clone()).to_string());
                    out.push_str(": ");
                    v.write(out, indent + 1);
                    out.push_str(if i + 1 < fields.len() { ",\n" } else { "\n" });
                }
                pad(out, indent);
                out.push('}');
            }
        }
    }
}

fn pad(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

/// 17 significant digits; non-finite values become `null`.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

/// Any object a document can hold.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainObject {
    Ph(PortHamiltonianSystem),
    Lti(LtiSystem),
    Descriptor(DescriptorModel),
    GeneratorRight(GeneratorRight),
    GeneratorLeft(GeneratorLeft),
    Certificate(MatchCertificate),
}

impl DomainObject {
    pub fn kind_name(&self) -> &'static str {
        match self {
            DomainObject::Ph(_) => "ph",
            DomainObject::Lti(_) => "lti",
            DomainObject::Descriptor(_) => "descriptor",
            DomainObject::GeneratorRight(_) => "generator_right",
            DomainObject::GeneratorLeft(_) => "generator_left",
            DomainObject::Certificate(_) => "certificate",
        }
    }
}

impl From<ReducedModel> for DomainObject {
    fn from(m: ReducedModel) -> Self {
        match m {
            ReducedModel::Ph(m) => DomainObject::Ph(m),
            ReducedModel::Lti(m) => DomainObject::Lti(m),
            ReducedModel::Descriptor(m) => DomainObject::Descriptor(m),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub name: String,
    pub object: DomainObject,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn parse_scalar(v: &Value) -> Result<C64> {
    match v {
        Value::Number(n) => n.as_f64().map(|x| c64(x, 0.0)).ok_or_else(|| schema("number out of range")),
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0].as_f64().ok_or_else(|| schema("complex entries must be numbers"))?;
            let im = pair[1].as_f64().ok_or_else(|| schema("complex entries must be numbers"))?;
            Ok(c64(re, im))
        }
        _ => Err(schema(format!("expected a number or [re, im], found {v}"))),
    }
}

/// Rows of scalars, or `{"jordan": {"eig": z, "size": k}}` when `allow_jordan`.
fn parse_matrix(name: &str, v: &Value, jordan: Option<bool>) -> Result<Matrix> {
    if let (Some(transpose), Some(spec)) = (jordan, v.get("jordan")) {
        let eig = parse_scalar(spec.get("eig").ok_or_else(|| schema(format!("{name}: jordan needs `eig`")))?)?;
        let size = spec
            .get("size")
            .and_then(Value::as_u64)
            .filter(|&k| k > 0)
            .ok_or_else(|| schema(format!("{name}: jordan needs a positive integer `size`")))?;
        let j = jordan_block(eig, size as usize);
        return Ok(if transpose { j.transpose() } else { j });
    }
    let rows = v.as_array().ok_or_else(|| schema(format!("{name} must be an array of rows")))?;
    if rows.is_empty() {
        return Ok(Matrix::zeros(0, 0));
    }
    let mut data: Vec<Vec<C64>> = Vec::with_capacity(rows.len());
    for row in rows {
        let entries = row.as_array().ok_or_else(|| schema(format!("{name}: each row must be an array")))?;
        data.push(entries.iter().map(parse_scalar).collect::<Result<_>>()?);
    }
    let nc = data[0].len();
    if data.iter().any(|r| r.len() != nc) {
        return Err(Error::DimensionMismatch(format!("{name}: rows have different lengths")));
    }
    Ok(Matrix::from_fn(data.len(), nc, |i, j| data[i][j]))
}

fn get_matrix(mats: &Value, key: &str, jordan: Option<bool>) -> Result<Matrix> {
    let v = mats.get(key).ok_or_else(|| schema(format!("missing matrix `{key}`")))?;
    parse_matrix(key, v, jordan)
}

fn flag(doc: &Value, key: &str) -> Result<bool> {
    match doc.get("flags").and_then(|f| f.get(key)) {
        None => Ok(false),
        Some(Value::Bool(b)) => Ok(*b),
        Some(other) => Err(schema(format!("flag `{key}` must be boolean, found {other}"))),
    }
}

fn parse_object(doc: &Value) -> Result<DomainObject> {
    let kind = doc.get("kind").and_then(Value::as_str).ok_or_else(|| schema("missing string field `kind`"))?;
    let empty = Value::Object(Default::default());
    let mats = doc.get("matrices").unwrap_or(&empty);
    if !mats.is_object() {
        return Err(schema("`matrices` must be an object"));
    }
    Ok(match kind {
        "ph" => {
            let sys = PortHamiltonianSystem::new(
                get_matrix(mats, "J", None)?,
                get_matrix(mats, "R", None)?,
                get_matrix(mats, "Q", None)?,
                get_matrix(mats, "B", None)?,
            )?;
            DomainObject::Ph(sys.with_flags(flag(doc, "r_psd")?, flag(doc, "q_pd")?)?)
        }
        "lti" => DomainObject::Lti(LtiSystem::new(
            get_matrix(mats, "A", None)?,
            get_matrix(mats, "B", None)?,
            get_matrix(mats, "C", None)?,
        )?),
        "descriptor" => DomainObject::Descriptor(DescriptorModel::new(
            get_matrix(mats, "E", None)?,
            get_matrix(mats, "F", None)?,
            get_matrix(mats, "G", None)?,
            get_matrix(mats, "H", None)?,
            flag(doc, "input_derivative")?,
            flag(doc, "output_derivative")?,
        )?),
        "generator_right" => {
            DomainObject::GeneratorRight(GeneratorRight::new(get_matrix(mats, "S", Some(false))?, get_matrix(mats, "L", None)?)?)
        }
        "generator_left" => {
            DomainObject::GeneratorLeft(GeneratorLeft::new(get_matrix(mats, "Q", Some(true))?, get_matrix(mats, "R", None)?)?)
        }
        "certificate" => {
            let ck = doc.get("certificate").ok_or_else(|| schema("missing field `certificate`"))?;
            let ck: CertificateKind =
                serde_json::from_value(ck.clone()).map_err(|e| schema(format!("certificate kind: {e}")))?;
            let gen_doc = doc.get("generator").ok_or_else(|| schema("missing field `generator`"))?;
            let generator = match parse_object(gen_doc)? {
                DomainObject::GeneratorRight(g) => Generator::Right(g),
                DomainObject::GeneratorLeft(g) => Generator::Left(g),
                _ => return Err(schema("certificate generator must be a generator")),
            };
            DomainObject::Certificate(MatchCertificate {
                kind: ck,
                p: get_matrix(mats, "P", None)?,
                generator,
                moments: get_matrix(mats, "moments", None)?,
            })
        }
        other => return Err(schema(format!("unknown kind `{other}`"))),
    })
}

/// Parses a document and validates the object's invariants.
pub fn parse_document(text: &str) -> Result<Document> {
    let doc: Value = serde_json::from_str(text).map_err(|e| schema(format!("malformed JSON: {e}")))?;
    if !doc.is_object() {
        return Err(schema("document must be a JSON object"));
    }
    let name = match doc.get("name") {
        None => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(schema("`name` must be a string")),
    };
    Ok(Document { name, object: parse_object(&doc)? })
}

fn flags_json(pairs: &[(&str, bool)]) -> Json {
    Json::obj(pairs.iter().map(|&(k, v)| (k, Json::Bool(v))).collect())
}

fn object_json(name: &str, object: &DomainObject) -> Json {
    let mats = |pairs: Vec<(&str, &Matrix)>| Json::obj(pairs.into_iter().map(|(k, m)| (k, Json::matrix(m))).collect());
    let mut fields = vec![("name", Json::str(name)), ("kind", Json::str(object.kind_name()))];
    match object {
        DomainObject::Ph(s) => {
            fields.push(("matrices", mats(vec![("J", s.j()), ("R", s.r()), ("Q", s.q()), ("B", s.b())])));
            fields.push(("flags", flags_json(&[("r_psd", s.r_psd()), ("q_pd", s.q_pd())])));
        }
        DomainObject::Lti(s) => fields.push(("matrices", mats(vec![("A", s.a()), ("B", s.b()), ("C", s.c())]))),
        DomainObject::Descriptor(s) => {
            fields.push(("matrices", mats(vec![("E", s.e()), ("F", s.f()), ("G", s.g()), ("H", s.h())])));
            fields.push((
                "flags",
                flags_json(&[("input_derivative", s.input_derivative()), ("output_derivative", s.output_derivative())]),
            ));
        }
        DomainObject::GeneratorRight(g) => fields.push(("matrices", mats(vec![("S", g.s()), ("L", g.l())]))),
        DomainObject::GeneratorLeft(g) => fields.push(("matrices", mats(vec![("Q", g.q()), ("R", g.r())]))),
        DomainObject::Certificate(c) => {
            let kind = serde_json::to_value(c.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
            fields.push(("certificate", Json::Str(kind)));
            fields.push(("matrices", mats(vec![("P", &c.p), ("moments", &c.moments)])));
            let gen = match &c.generator {
                Generator::Right(g) => DomainObject::GeneratorRight(g.clone()),
                Generator::Left(g) => DomainObject::GeneratorLeft(g.clone()),
            };
            fields.push(("generator", object_json("", &gen)));
        }
    }
    Json::obj(fields)
}

pub fn write_document(doc: &Document) -> String {
    object_json(&doc.name, &doc.object).render()
}

pub fn moments_json(mv: &MomentVector) -> Json {
    let tag = |v: serde_json::Result<Value>| v.ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    Json::obj(vec![
        ("kind", Json::str("moments")),
        ("side", Json::Str(tag(serde_json::to_value(mv.side)))),
        ("variant", Json::Str(tag(serde_json::to_value(mv.kind)))),
        ("points", Json::Row(mv.points.iter().map(|&z| Json::scalar(z)).collect())),
        ("values", Json::Arr(mv.values.iter().map(Json::matrix).collect())),
    ])
}

pub fn report_json(report: &VerificationReport) -> Json {
    let checks = report
        .checks
        .iter()
        .map(|c| {
            let mut f = vec![
                ("name", Json::str(&c.name)),
                ("residual", Json::Num(c.residual)),
                ("tolerance", Json::Num(c.tolerance)),
                ("pass", Json::Bool(c.pass)),
            ];
            if let Some(note) = &c.note {
                f.push(("note", Json::str(note)));
            }
            Json::obj(f)
        })
        .collect();
    Json::obj(vec![("pass", Json::Bool(report.passed())), ("checks", Json::Arr(checks))])
}
