//! Output views. JSON and text are rendered from the same serialized view,
//! so both carry identical numbers.

use std::io::Write;

use num_traits::Signed;
use serde::Serialize;
use serde_json::Value;

use crate::lp::LPOutcome;
use crate::seq::{Rational, RationalSequence};
use crate::silp::{BoundsReport, CandidateSource, Feasibility, LevelReport};

/// Note attached to every analysis report.
pub const EDUAL_NOTE: &str =
    "extended dual values are lower bounds over finite support plus lambda * limit multipliers";

pub fn fmt_rational(q: &Rational) -> String {
    q.to_string()
}

fn fmt_all(v: &[Rational]) -> Vec<String> {
    v.iter().map(fmt_rational).collect()
}

fn fmt_opt(q: Option<&Rational>) -> Option<String> {
    q.map(fmt_rational)
}

/// `q` rounded half away from zero to `decimals` places.
pub fn approximate(q: &Rational, decimals: usize) -> String {
    let scale = Rational::from_integer(num_bigint::BigInt::from(10u32).pow(decimals as u32));
    let scaled = (q * &scale).round().to_integer();
    let digits = scaled.abs().to_string();
    let digits = format!("{digits:0>width$}", width = decimals + 1);
    let (int, frac) = digits.split_at(digits.len() - decimals);
    let sign = if scaled.is_negative() { "-" } else { "" };
    if decimals == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SequenceView {
    pub prefix: Vec<String>,
    pub tail: String,
}

impl SequenceView {
    pub fn new(s: &RationalSequence) -> Self {
        SequenceView { prefix: fmt_all(s.prefix()), tail: s.tail_expr() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OutcomeView {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primal: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duals: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub farkas: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ray: Option<Vec<String>>,
}

impl OutcomeView {
    pub fn new(o: &LPOutcome) -> Self {
        let mut v = OutcomeView {
            status: o.status().as_str().to_string(),
            value: None,
            primal: None,
            duals: None,
            farkas: None,
            point: None,
            ray: None,
        };
        match o {
            LPOutcome::Optimal { value, primal, duals } => {
                v.value = Some(fmt_rational(value));
                v.primal = Some(fmt_all(primal));
                v.duals = Some(fmt_all(duals));
            }
            LPOutcome::Infeasible { farkas } => v.farkas = Some(fmt_all(farkas)),
            LPOutcome::Unbounded { point, ray } => {
                v.point = Some(fmt_all(point));
                v.ray = Some(fmt_all(ray));
            }
        }
        v
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LpCommandView {
    pub name: String,
    pub problem: &'static str,
    pub k: u64,
    #[serde(flatten)]
    pub outcome: OutcomeView,
}

/// Status and value only, as used in per-level summaries.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryView {
    pub status: String,
    pub value: Option<String>,
}

impl SummaryView {
    fn new(o: Option<&LPOutcome>) -> Self {
        match o {
            Some(o) => SummaryView { status: o.status().as_str().to_string(), value: fmt_opt(o.value()) },
            None => SummaryView { status: "SKIPPED".to_string(), value: None },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelView {
    pub k: u64,
    pub primal: SummaryView,
    pub fdual: SummaryView,
    pub edual: SummaryView,
    pub limit_primal: SummaryView,
}

impl LevelView {
    fn new(l: &LevelReport) -> Self {
        LevelView {
            k: l.k,
            primal: SummaryView::new(Some(&l.primal)),
            fdual: SummaryView::new(Some(&l.fdual)),
            edual: SummaryView::new(l.edual.as_ref()),
            limit_primal: SummaryView::new(l.limit_primal.as_ref()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FeasibilityView {
    pub result: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack: Option<String>,
}

impl FeasibilityView {
    pub fn new(f: &Feasibility) -> Self {
        match f {
            Feasibility::Certified { objective } => {
                FeasibilityView { result: "CERTIFIED", objective: Some(fmt_rational(objective)), index: None, slack: None }
            }
            Feasibility::Violated { index, slack } => {
                FeasibilityView { result: "VIOLATED", objective: None, index: Some(*index), slack: Some(fmt_rational(slack)) }
            }
        }
    }

    /// One-line summary, e.g. `CERTIFIED objective 1/10`.
    pub fn line(&self) -> String {
        match (&self.objective, self.index, &self.slack) {
            (Some(obj), _, _) => format!("{} objective {obj}", self.result),
            (None, Some(i), Some(s)) => format!("{} index {i} slack {s}", self.result),
            _ => self.result.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateView {
    pub x: Vec<String>,
    pub source: &'static str,
    #[serde(flatten)]
    pub feasibility: FeasibilityView,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeView {
    pub name: String,
    pub space: &'static str,
    pub epsilon: String,
    pub schedule: Vec<u64>,
    pub levels: Vec<LevelView>,
    pub candidates: Vec<CandidateView>,
    pub best_upper_bound: Option<String>,
    pub best_fdual: Option<String>,
    pub best_edual: Option<String>,
    pub fdual_gap: Option<String>,
    pub edual_gap: Option<String>,
    pub consistent: bool,
    pub note: &'static str,
    pub classification: &'static str,
}

impl AnalyzeView {
    pub fn new(name: &str, r: &BoundsReport) -> Self {
        AnalyzeView {
            name: name.to_string(),
            space: r.space.name(),
            epsilon: fmt_rational(&r.epsilon),
            schedule: r.levels.iter().map(|l| l.k).collect(),
            levels: r.levels.iter().map(LevelView::new).collect(),
            candidates: r
                .candidates
                .iter()
                .map(|c| CandidateView {
                    x: fmt_all(&c.x),
                    source: match c.source {
                        CandidateSource::User => "user",
                        CandidateSource::LimitAugmentedOptimizer => "limit-augmented optimizer",
                    },
                    feasibility: FeasibilityView::new(&c.result),
                })
                .collect(),
            best_upper_bound: fmt_opt(r.best_upper_bound.as_ref()),
            best_fdual: fmt_opt(r.best_fdual.as_ref()),
            best_edual: fmt_opt(r.best_edual.as_ref()),
            fdual_gap: fmt_opt(r.fdual_gap().as_ref()),
            edual_gap: fmt_opt(r.edual_gap().as_ref()),
            consistent: r.is_consistent(),
            note: EDUAL_NOTE,
            classification: r.classification.as_str(),
        }
    }
}

pub fn to_json<T: Serialize>(view: &T) -> String {
    serde_json::to_string_pretty(view).expect("views always serialize") + "\n"
}

/// Indented `key: value` lines, in field order.
pub fn to_text<T: Serialize>(view: &T) -> String {
    let mut out = String::new();
    if let Value::Object(map) = serde_json::to_value(view).expect("views always serialize") {
        render_object(&map, 0, &mut out);
    }
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "none".to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render_object(map: &serde_json::Map<String, Value>, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    for (key, value) in map {
        match value {
            Value::Object(inner) if inner.is_empty() => out.push_str(&format!("{pad}{key}: {{}}\n")),
            Value::Object(inner) => {
                out.push_str(&format!("{pad}{key}:\n"));
                render_object(inner, indent + 2, out);
            }
            Value::Array(items) if items.iter().any(Value::is_object) => {
                out.push_str(&format!("{pad}{key}:\n"));
                for item in items {
                    let mut block = String::new();
                    match item {
                        Value::Object(inner) => render_object(inner, indent + 4, &mut block),
                        other => block = format!("{pad}    {}\n", scalar(other)),
                    }
                    out.push_str(&format!("{pad}  - {}", &block[indent + 4..]));
                }
            }
            Value::Array(items) => {
                let joined: Vec<String> = items.iter().map(scalar).collect();
                out.push_str(&format!("{pad}{key}: [{}]\n", joined.join(", ")));
            }
            other => out.push_str(&format!("{pad}{key}: {}\n", scalar(other))),
        }
    }
}

/// Per-level bound curves. With `decimals`, approximate value columns are
/// appended after the exact ones.
pub fn write_csv<W: Write>(levels: &[LevelReport], decimals: Option<usize>, w: W) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let mut header =
        vec!["k", "primal_status", "primal_value", "fdual_status", "fdual_value", "edual_status", "edual_value"];
    if decimals.is_some() {
        header.extend(["primal_value_approx", "fdual_value_approx", "edual_value_approx"]);
    }
    wtr.write_record(&header)?;
    for l in levels {
        let cells = [SummaryView::new(Some(&l.primal)), SummaryView::new(Some(&l.fdual)), SummaryView::new(l.edual.as_ref())];
        let mut row = vec![l.k.to_string()];
        for c in &cells {
            row.push(c.status.clone());
            row.push(c.value.clone().unwrap_or_default());
        }
        if let Some(d) = decimals {
            let outcomes = [Some(&l.primal), Some(&l.fdual), l.edual.as_ref()];
            for o in outcomes {
                row.push(o.and_then(LPOutcome::value).map(|q| approximate(q, d)).unwrap_or_default());
            }
        }
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}
