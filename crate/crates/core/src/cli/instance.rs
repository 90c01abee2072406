//! JSON instance files.
//!
//! ```json
//! {
//!   "name": "example31",
//!   "num_vars": 2,
//!   "objective": ["1", "0"],
//!   "coefficients": [{ "tail": "1" }, { "tail": "1/i^2" }],
//!   "rhs": { "prefix": [], "tail": "2/i" },
//!   "candidates": [["1/10", "10"]]
//! }
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seq::{parse_rational, Rational, RationalSequence, SeqError};
use crate::silp::SILPInstance;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{location}: {message}")]
pub struct ParseError {
    /// `line L, column C` for JSON syntax, otherwise a field path, with the
    /// expression column appended for tail errors.
    pub location: String,
    pub message: String,
}

impl ParseError {
    fn at(location: impl Into<String>, message: impl Into<String>) -> Self {
        ParseError { location: location.into(), message: message.into() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SequenceFile {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    prefix: Vec<String>,
    tail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    name: String,
    num_vars: usize,
    objective: Vec<String>,
    coefficients: Vec<SequenceFile>,
    rhs: SequenceFile,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    candidates: Vec<Vec<String>>,
}

/// A parsed instance file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedInstance {
    pub name: String,
    pub instance: SILPInstance,
    /// Candidate points stored alongside the instance.
    pub candidates: Vec<Vec<Rational>>,
}

fn parse_value(path: &str, text: &str) -> Result<Rational, ParseError> {
    parse_rational(text.trim()).ok_or_else(|| ParseError::at(path, format!("invalid rational literal {text:?}")))
}

fn parse_sequence(path: &str, s: &SequenceFile) -> Result<RationalSequence, ParseError> {
    let prefix = s
        .prefix
        .iter()
        .enumerate()
        .map(|(i, v)| parse_value(&format!("{path}.prefix[{i}]"), v))
        .collect::<Result<Vec<_>, _>>()?;
    RationalSequence::parse(prefix, &s.tail).map_err(|e| match e {
        SeqError::Expr(x) => ParseError::at(format!("{path}.tail, column {}", x.column), x.message),
        other => ParseError::at(format!("{path}.tail"), other.to_string()),
    })
}

/// Comma-separated rational literals, e.g. `1/10,10`.
pub fn parse_point(path: &str, text: &str) -> Result<Vec<Rational>, ParseError> {
    text.split(',').enumerate().map(|(i, v)| parse_value(&format!("{path}[{i}]"), v)).collect()
}

pub fn parse_instance(text: &str) -> Result<NamedInstance, ParseError> {
    let file: InstanceFile = serde_json::from_str(text)
        .map_err(|e| ParseError::at(format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
    if file.objective.len() != file.num_vars {
        return Err(ParseError::at(
            "objective",
            format!("has {} entries but num_vars is {}", file.objective.len(), file.num_vars),
        ));
    }
    if file.coefficients.len() != file.num_vars {
        return Err(ParseError::at(
            "coefficients",
            format!("has {} sequences but num_vars is {}", file.coefficients.len(), file.num_vars),
        ));
    }
    let phi = file
        .objective
        .iter()
        .enumerate()
        .map(|(j, v)| parse_value(&format!("objective[{j}]"), v))
        .collect::<Result<Vec<_>, _>>()?;
    let a = file
        .coefficients
        .iter()
        .enumerate()
        .map(|(j, s)| parse_sequence(&format!("coefficients[{j}]"), s))
        .collect::<Result<Vec<_>, _>>()?;
    let b = parse_sequence("rhs", &file.rhs)?;
    let mut candidates = Vec::with_capacity(file.candidates.len());
    for (c, point) in file.candidates.iter().enumerate() {
        if point.len() != file.num_vars {
            return Err(ParseError::at(format!("candidates[{c}]"), format!("needs {} coordinates", file.num_vars)));
        }
        let x = point
            .iter()
            .enumerate()
            .map(|(j, v)| parse_value(&format!("candidates[{c}][{j}]"), v))
            .collect::<Result<Vec<_>, _>>()?;
        candidates.push(x);
    }
    let instance = SILPInstance::new(phi, a, b).map_err(|e| ParseError::at("num_vars", e.to_string()))?;
    Ok(NamedInstance { name: file.name, instance, candidates })
}

fn sequence_file(s: &RationalSequence) -> SequenceFile {
    SequenceFile { prefix: s.prefix().iter().map(ToString::to_string).collect(), tail: s.tail_expr() }
}

/// Pretty-printed JSON that [`parse_instance`] reads back to an identical
/// value.
pub fn serialize_instance(named: &NamedInstance) -> String {
    let inst = &named.instance;
    let file = InstanceFile {
        name: named.name.clone(),
        num_vars: inst.num_vars(),
        objective: inst.objective().iter().map(ToString::to_string).collect(),
        coefficients: inst.coefficients().iter().map(sequence_file).collect(),
        rhs: sequence_file(inst.rhs()),
        candidates: named.candidates.iter().map(|x| x.iter().map(ToString::to_string).collect()).collect(),
    };
    serde_json::to_string_pretty(&file).expect("instance files always serialize")
}
