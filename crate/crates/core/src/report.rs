//! The JSON report envelope shared by every subcommand, plus CSV and text
//! renderings.

use std::fmt::Write as _;

use clap::ValueEnum;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::density::{density_csv, DensityReport};
use crate::error::{Error, Result};
use crate::experiments::{ExperimentReport, K2Escape, Payload};

pub const SCHEMA_VERSION: u32 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        }
    }
}

/// Field order is part of the format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub theorem: String,
    pub params: Map<String, Value>,
    pub outcome: String,
    pub witnesses: Vec<Value>,
    pub stats: Map<String, Value>,
    pub timing_ms: Option<u64>,
    pub seed: u64,
    pub version: String,
    #[serde(skip)]
    pub table: Option<DensityReport>,
}

impl Report {
    pub fn new(theorem: &str, outcome: &str) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            theorem: theorem.to_string(),
            params: Map::new(),
            outcome: outcome.to_string(),
            witnesses: Vec::new(),
            stats: Map::new(),
            timing_ms: None,
            seed: 0,
            version: VERSION.to_string(),
            table: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn stat(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.stats.insert(key.to_string(), value.into());
        self
    }
}

/// A float rounded to six decimal places.
pub fn fixed6(x: f64) -> Value {
    let rounded = (x * 1e6).round() / 1e6;
    serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

/// Big integers travel as decimal strings.
pub fn big(v: &BigUint) -> Value {
    Value::String(v.to_string())
}

fn pairs(p: &[(u64, u64)]) -> Value {
    Value::Array(p.iter().map(|&(u, v)| json!([u, v])).collect())
}

pub fn experiment_to_report(r: &ExperimentReport, include_timing: bool) -> Report {
    let w = &r.world;
    let mut out = Report::new(r.theorem.tag(), r.outcome.tag())
        .param("base", w.base.primes().to_vec())
        .param("n", w.n)
        .param("N", w.limit);
    if let Some(s) = w.s {
        out = out.param("s", s);
    }
    if let Some(width) = w.w {
        out = out.param("w", width);
    }
    out.seed = r.seed;
    out.timing_ms = include_timing.then_some(r.elapsed.as_millis() as u64);
    out = out
        .stat("search_space", r.search_space)
        .stat("witness_count", r.witness_count);
    match &r.payload {
        Payload::None => {}
        Payload::Triples { triples, extracted } => {
            out.witnesses = triples.iter().map(|t| json!(t.as_array())).collect();
            out = out
                .stat("color", triples[0].color.to_string())
                .stat("extracted", extracted.iter().map(|&(x, y, z)| json!([x, y, z])).collect::<Vec<_>>());
        }
        Payload::Progression(ap) => {
            out.witnesses = vec![json!(ap.terms)];
            out = out.stat("roots", json!(ap.roots));
        }
        Payload::Folkman { sets, gap_pairs } => {
            out.witnesses = sets.iter().map(|s| json!(s.witness.elements)).collect();
            out = out
                .stat("images", sets.iter().map(|s| json!(s.images)).collect::<Vec<_>>())
                .stat("r_parts", sets.iter().map(|s| s.r_part).collect::<Vec<_>>());
            if let Some(p) = gap_pairs {
                out = out.stat("gap_pairs", pairs(p));
            }
        }
        Payload::Star(img) => {
            out.witnesses = vec![json!({
                "anchors": img.witness.anchors,
                "partners": img.witness.partners,
                "color": img.color.to_string(),
            })];
            out = out
                .stat("multiplier", big(&img.multiplier))
                .stat(
                    "roots",
                    img.roots.iter().map(|[a, b]| json!([big(a), big(b)])).collect::<Vec<_>>(),
                )
                .stat("difference", big(&img.difference));
            if let Some(p) = &img.gap_pairs {
                out = out.stat("gap_pairs", pairs(p));
            }
        }
        Payload::StarEscape { witness, reason, largest_class } => {
            let reason = match reason {
                K2Escape::NonSmoothColor => "non_smooth_color",
                K2Escape::WCapped => "w_capped",
            };
            out = out.stat("escape", reason).stat("largest_class", *largest_class);
            if let Some(wit) = witness {
                out.witnesses = vec![json!({
                    "anchors": wit.anchors,
                    "partners": wit.partners,
                    "color": "non-smooth",
                })];
            }
        }
    }
    if let Some(e) = &r.escape {
        out = out
            .stat("smooth_pairs", e.smooth_pairs)
            .stat("non_smooth_sums", e.non_smooth_sums)
            .stat("escape_fraction", fixed6(e.fraction()));
    }
    if let Some(d) = &r.density {
        out = out.stat(
            "density",
            json!({
                "smooth": d.smooth_count,
                "smooth_nth_powers": d.smooth_nth_power_count,
                "upper_bound": fixed6(d.upper_bound),
                "lower_bound": d.lower_bound,
                "delta": fixed6(d.delta_estimate),
                "crossover": d.crossover,
            }),
        );
    }
    out
}

fn text_summary(r: &Report) -> String {
    let mut s = String::new();
    let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let _ = writeln!(s, "{} [{}]: {}", r.theorem, params.join(" "), r.outcome);
    for w in r.witnesses.iter().take(8) {
        let _ = writeln!(s, "  witness {w}");
    }
    if r.witnesses.len() > 8 {
        let _ = writeln!(s, "  ... {} more", r.witnesses.len() - 8);
    }
    for (k, v) in &r.stats {
        let _ = writeln!(s, "  {k}: {v}");
    }
    if let Some(ms) = r.timing_ms {
        let _ = writeln!(s, "  time: {ms} ms");
    }
    s
}

pub fn emit_report(report: &Report, format: Format) -> Result<String> {
    emit_reports(std::slice::from_ref(report), format)
}

/// One report renders as an object, several as an array.
pub fn emit_reports(reports: &[Report], format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let text = if let [one] = reports {
                serde_json::to_string_pretty(one)
            } else {
                serde_json::to_string_pretty(reports)
            };
            text.map(|mut t| {
                t.push('\n');
                t
            })
            .map_err(|e| Error::Usage(e.to_string()))
        }
        Format::Csv => {
            let tables: Vec<&DensityReport> = reports.iter().filter_map(|r| r.table.as_ref()).collect();
            if tables.len() != reports.len() || tables.is_empty() {
                return Err(Error::Usage("CSV output is only available for density tables".into()));
            }
            let mut out = String::new();
            for (i, t) in tables.iter().enumerate() {
                let csv = density_csv(t);
                // one header for the whole stream
                out.push_str(if i == 0 { &csv } else { csv.split_once('\n').map_or("", |x| x.1) });
            }
            Ok(out)
        }
        Format::Text => Ok(reports.iter().map(text_summary).collect()),
    }
}
