//! JSON file formats for knots and barcodes.
//!
//! A knot file looks like
//!
//! ```json
//! {
//!   "generators": [{"name": "q", "grading": 1}],
//!   "differential": {"q": [[], []]},
//!   "patches": [[{"name": "q", "coeff": 1}], [{"name": "q", "coeff": 1}]],
//!   "heights": {"q": 1}
//! }
//! ```
//!
//! Words are arrays of generator names and the empty array is the unit.
//! Heights may be JSON numbers (read exactly from their decimal text) or
//! strings such as `"1/3"`.

use std::collections::BTreeMap;

use serde_json::{Map, Value};

use crate::algebra::{Dga, Element, Generator, HeightAssignment, Violation, Word};
use crate::diagram::{DiagramError, LagrangianDiagramData, LinearForm};
use crate::persist::{Bar, Barcode};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    MalformedJson { line: usize, column: usize, message: String },
    #[error("missing key `{0}`")]
    MissingKey(String),
    #[error("`{path}`: {message}")]
    InvalidType { path: String, message: String },
    #[error("`{path}`: unknown generator `{name}`")]
    UnknownGenerator { path: String, name: String },
    #[error("generator `{0}` is declared twice")]
    DuplicateGenerator(String),
    #[error("no differential given for generator `{0}`")]
    MissingDifferential(String),
    #[error("`differential.{generator}`: word {word} has grading {found}, expected {expected}")]
    GradingViolation { generator: String, word: String, expected: i64, found: i64 },
    #[error("`differential.{generator}`: applying the differential twice leaves {residue}")]
    NotNilpotent { generator: String, residue: String },
    #[error("`{path}`: {message}")]
    InvalidHeight { path: String, message: String },
    #[error("`{path}`: {message}")]
    InvalidPatch { path: String, message: String },
    #[error("`{path}`: {message}")]
    InvalidBar { path: String, message: String },
}

impl FormatError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            FormatError::MalformedJson { .. } => "MALFORMED_JSON",
            FormatError::MissingKey(_) => "MISSING_KEY",
            FormatError::InvalidType { .. } => "INVALID_TYPE",
            FormatError::UnknownGenerator { .. } => "UNKNOWN_GENERATOR",
            FormatError::DuplicateGenerator(_) => "DUPLICATE_GENERATOR",
            FormatError::MissingDifferential(_) => "MISSING_DIFFERENTIAL",
            FormatError::GradingViolation { .. } => "GRADING_VIOLATION",
            FormatError::NotNilpotent { .. } => "DIFFERENTIAL_NOT_NILPOTENT",
            FormatError::InvalidHeight { .. } => "INVALID_HEIGHT",
            FormatError::InvalidPatch { .. } => "INVALID_PATCH",
            FormatError::InvalidBar { .. } => "INVALID_BAR",
        }
    }
}

/// Everything a knot file describes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotFile {
    pub dga: Dga,
    pub diagram: LagrangianDiagramData,
    pub heights: Option<HeightAssignment>,
    pub meta: Option<Value>,
}

fn invalid_type(path: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::InvalidType { path: path.into(), message: message.into() }
}

fn parse_json(bytes: &[u8]) -> Result<Value, FormatError> {
    serde_json::from_slice(bytes).map_err(|e| FormatError::MalformedJson {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn root_object(value: &Value) -> Result<&Map<String, Value>, FormatError> {
    value.as_object().ok_or_else(|| invalid_type("$", "expected a JSON object"))
}

fn required<'a>(root: &'a Map<String, Value>, key: &str) -> Result<&'a Value, FormatError> {
    root.get(key).ok_or_else(|| FormatError::MissingKey(key.to_string()))
}

fn array<'a>(value: &'a Value, path: &str) -> Result<&'a Vec<Value>, FormatError> {
    value.as_array().ok_or_else(|| invalid_type(path, "expected an array"))
}

fn string<'a>(value: &'a Value, path: &str) -> Result<&'a str, FormatError> {
    value.as_str().ok_or_else(|| invalid_type(path, "expected a string"))
}

fn integer(value: &Value, path: &str) -> Result<i64, FormatError> {
    value.as_i64().ok_or_else(|| invalid_type(path, "expected an integer"))
}

/// Reads a JSON number or a numeric string exactly.
fn rational(value: &Value) -> Option<Rational> {
    match value {
        Value::Number(n) => parse_rational(&n.to_string()).ok(),
        Value::String(s) => parse_rational(s).ok(),
        _ => None,
    }
}

/// Writes terminating decimals as JSON numbers and anything else as `"p/q"`.
fn rational_value(r: &Rational) -> Value {
    let text = format_rational(r);
    if text.contains('/') {
        Value::String(text)
    } else {
        serde_json::from_str(&text).expect("a decimal literal is valid JSON")
    }
}

pub fn parse_knot_file(bytes: &[u8]) -> Result<KnotFile, FormatError> {
    let value = parse_json(bytes)?;
    let root = root_object(&value)?;

    let mut generators = Vec::new();
    let mut by_name = BTreeMap::new();
    for (i, entry) in array(required(root, "generators")?, "generators")?.iter().enumerate() {
        let path = format!("generators[{i}]");
        let obj = entry.as_object().ok_or_else(|| invalid_type(&path, "expected an object"))?;
        let name = string(obj.get("name").ok_or_else(|| FormatError::MissingKey(format!("{path}.name")))?, &path)?;
        let grading = integer(
            obj.get("grading").ok_or_else(|| FormatError::MissingKey(format!("{path}.grading")))?,
            &format!("{path}.grading"),
        )?;
        if by_name.insert(name.to_string(), i).is_some() {
            return Err(FormatError::DuplicateGenerator(name.to_string()));
        }
        generators.push(Generator { id: i, name: name.to_string(), grading });
    }
    let lookup = |name: &str, path: &str| {
        by_name.get(name).copied().ok_or_else(|| FormatError::UnknownGenerator {
            path: path.to_string(),
            name: name.to_string(),
        })
    };

    let diff_obj = required(root, "differential")?
        .as_object()
        .ok_or_else(|| invalid_type("differential", "expected an object"))?;
    let mut differential = vec![None; generators.len()];
    for (name, words) in diff_obj {
        let path = format!("differential.{name}");
        let id = lookup(name, &path)?;
        let mut element = Element::zero();
        for (w, word) in array(words, &path)?.iter().enumerate() {
            let wpath = format!("{path}[{w}]");
            let letters = array(word, &wpath)?
                .iter()
                .map(|l| lookup(string(l, &wpath)?, &wpath))
                .collect::<Result<Word, _>>()?;
            element.toggle(letters);
        }
        differential[id] = Some(element);
    }
    let differential = differential
        .into_iter()
        .zip(&generators)
        .map(|(d, g)| d.ok_or_else(|| FormatError::MissingDifferential(g.name.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let dga = Dga::new(generators, differential).expect("ids are contiguous and names unique");
    if let Some(violation) = dga.validate().violations.first() {
        return Err(match violation {
            Violation::GradingDrop { generator, word, expected, found } => FormatError::GradingViolation {
                generator: dga.name(*generator).unwrap_or("?").to_string(),
                word: dga.display_word(word),
                expected: *expected,
                found: *found,
            },
            Violation::SquareNonZero { generator, residue } => FormatError::NotNilpotent {
                generator: dga.name(*generator).unwrap_or("?").to_string(),
                residue: dga.display_element(residue),
            },
        });
    }

    let mut patches = Vec::new();
    for (p, patch) in array(required(root, "patches")?, "patches")?.iter().enumerate() {
        let path = format!("patches[{p}]");
        let mut corners = Vec::new();
        for (c, corner) in array(patch, &path)?.iter().enumerate() {
            let cpath = format!("{path}[{c}]");
            let obj = corner.as_object().ok_or_else(|| invalid_type(&cpath, "expected an object"))?;
            let name = string(obj.get("name").ok_or_else(|| FormatError::MissingKey(format!("{cpath}.name")))?, &cpath)?;
            let coeff = integer(
                obj.get("coeff").ok_or_else(|| FormatError::MissingKey(format!("{cpath}.coeff")))?,
                &format!("{cpath}.coeff"),
            )?;
            corners.push((lookup(name, &cpath)?, coeff));
        }
        let form = LinearForm::new(corners).map_err(|e| FormatError::InvalidPatch {
            path: path.clone(),
            message: match e {
                DiagramError::DuplicateCorner(id) => format!("corner `{}` listed twice", dga.name(id).unwrap_or("?")),
                DiagramError::BadCoefficient { id, coeff } => {
                    format!("coefficient {coeff} on `{}` is not one of -2, -1, 1, 2", dga.name(id).unwrap_or("?"))
                }
                other => other.to_string(),
            },
        })?;
        patches.push(form);
    }
    let ng_resolved = match root.get("ng_resolved") {
        None => false,
        Some(v) => v.as_bool().ok_or_else(|| invalid_type("ng_resolved", "expected a boolean"))?,
    };
    let diagram = LagrangianDiagramData::new((0..dga.len()).collect(), patches, ng_resolved)
        .expect("corners were resolved against the generator list");

    let heights = match root.get("heights") {
        None => None,
        Some(v) => {
            let obj = v.as_object().ok_or_else(|| invalid_type("heights", "expected an object"))?;
            let mut h = HeightAssignment::default();
            for (name, value) in obj {
                let path = format!("heights.{name}");
                let id = lookup(name, &path)?;
                let r = rational(value).ok_or_else(|| FormatError::InvalidHeight {
                    path: path.clone(),
                    message: "expected a number or a fraction string".into(),
                })?;
                h.insert(id, r).map_err(|_| FormatError::InvalidHeight {
                    path: path.clone(),
                    message: "heights must be positive".into(),
                })?;
            }
            if let Some(g) = dga.generators().iter().find(|g| h.get(g.id).is_err()) {
                return Err(FormatError::InvalidHeight {
                    path: "heights".into(),
                    message: format!("no height for `{}`", g.name),
                });
            }
            Some(h)
        }
    };

    Ok(KnotFile { dga, diagram, heights, meta: root.get("meta").cloned() })
}

pub fn knot_file_to_value(file: &KnotFile) -> Value {
    let dga = &file.dga;
    let name = |id| Value::String(dga.name(id).expect("id from this DGA").to_string());
    let generators = dga
        .generators()
        .iter()
        .map(|g| serde_json::json!({"name": g.name, "grading": g.grading}))
        .collect();
    let differential: Map<String, Value> = dga
        .generators()
        .iter()
        .map(|g| {
            let words = dga.differentials()[g.id]
                .words()
                .map(|w| Value::Array(w.letters().iter().map(|&id| name(id)).collect()))
                .collect();
            (g.name.clone(), Value::Array(words))
        })
        .collect();
    let patches = file
        .diagram
        .patches()
        .iter()
        .map(|p| {
            Value::Array(
                p.terms()
                    .iter()
                    .map(|&(id, c)| serde_json::json!({"name": name(id), "coeff": c}))
                    .collect(),
            )
        })
        .collect();

    let mut root = Map::new();
    root.insert("generators".into(), Value::Array(generators));
    root.insert("differential".into(), Value::Object(differential));
    root.insert("patches".into(), Value::Array(patches));
    if let Some(h) = &file.heights {
        let heights = h.iter().map(|(id, r)| (dga.name(id).unwrap_or("?").to_string(), rational_value(r))).collect();
        root.insert("heights".into(), Value::Object(heights));
    }
    if file.diagram.ng_resolved() {
        root.insert("ng_resolved".into(), Value::Bool(true));
    }
    if let Some(meta) = &file.meta {
        root.insert("meta".into(), meta.clone());
    }
    Value::Object(root)
}

pub fn write_knot_file(file: &KnotFile) -> String {
    let mut s = serde_json::to_string_pretty(&knot_file_to_value(file)).expect("JSON values serialize");
    s.push('\n');
    s
}

fn label_value(label: &[String]) -> Value {
    Value::String(label.join("+"))
}

fn parse_label(value: &Value, path: &str) -> Result<Vec<String>, FormatError> {
    let text = value.as_str().ok_or_else(|| FormatError::InvalidBar {
        path: path.to_string(),
        message: "labels are strings such as \"q3+q5\"".into(),
    })?;
    let parts: Vec<String> = text.split('+').map(|p| p.trim().to_string()).collect();
    if parts.iter().any(String::is_empty) {
        return Err(FormatError::InvalidBar { path: path.to_string(), message: format!("bad label `{text}`") });
    }
    Ok(parts)
}

pub fn parse_barcode_file(bytes: &[u8]) -> Result<Barcode, FormatError> {
    let value = parse_json(bytes)?;
    let root = root_object(&value)?;
    let mut bars = Vec::new();
    for (i, entry) in array(required(root, "bars")?, "bars")?.iter().enumerate() {
        let path = format!("bars[{i}]");
        let obj = entry.as_object().ok_or_else(|| invalid_type(&path, "expected an object"))?;
        let field = |key: &str| obj.get(key).ok_or_else(|| FormatError::MissingKey(format!("{path}.{key}")));
        let bad = |message: &str| FormatError::InvalidBar { path: path.clone(), message: message.to_string() };
        let degree = integer(field("degree")?, &format!("{path}.degree"))?;
        let birth = rational(field("birth")?).ok_or_else(|| bad("birth must be a number"))?;
        let death = match field("death")? {
            Value::String(s) if s == "inf" => None,
            v => Some(rational(v).ok_or_else(|| bad("death must be a number or \"inf\""))?),
        };
        let bar = Bar::new(degree, birth, death).map_err(|e| bad(&e.to_string()))?;
        let birth_label = obj.get("birth_label").map(|v| parse_label(v, &path)).transpose()?;
        let death_label = obj.get("death_label").map(|v| parse_label(v, &path)).transpose()?;
        bars.push(bar.with_labels(birth_label, death_label));
    }
    Ok(Barcode::new(bars))
}

pub fn barcode_to_value(barcode: &Barcode) -> Value {
    let bars = barcode
        .bars()
        .iter()
        .map(|b| {
            let mut obj = Map::new();
            obj.insert("degree".into(), Value::from(b.degree));
            obj.insert("birth".into(), rational_value(&b.birth));
            obj.insert("death".into(), b.death.as_ref().map_or(Value::String("inf".into()), rational_value));
            if let Some(l) = &b.birth_label {
                obj.insert("birth_label".into(), label_value(l));
            }
            if let Some(l) = &b.death_label {
                obj.insert("death_label".into(), label_value(l));
            }
            Value::Object(obj)
        })
        .collect();
    serde_json::json!({ "bars": Value::Array(bars) })
}

pub fn write_barcode_file(barcode: &Barcode) -> String {
    let mut s = serde_json::to_string_pretty(&barcode_to_value(barcode)).expect("JSON values serialize");
    s.push('\n');
    s
}
