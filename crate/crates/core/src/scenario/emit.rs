//! Text, CSV and JSON renderings of a [`ReportBundle`].
//!
//! * Human text: point estimates and summary at two decimals.
//! * CSV: header `record_type,name,quantile,value,bin_lower,bin_upper,count`,
//!   reals at 6 significant digits, integers verbatim.
//! * JSON: one object with the bundle's fields in declaration order, reals
//!   rounded to 12 significant digits.

use std::io::{self, Write};
use std::str::FromStr;

use super::{ReportBundle, ScenarioError};

const CSV_DIGITS: usize = 6;
const JSON_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "human" | "text" => Ok(Self::Human),
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown format `{other}` (expected human, csv or json)")),
        }
    }
}

pub fn emit_report(r: &ReportBundle, format: Format, sink: &mut dyn Write) -> io::Result<()> {
    sink.write_all(render_report(r, format).as_bytes())?;
    sink.flush()
}

pub fn render_report(r: &ReportBundle, format: Format) -> String {
    match format {
        Format::Human => human(r),
        Format::Csv => csv(r),
        Format::Json => json(r),
    }
}

/// Reads back the output of [`Format::Json`].
pub fn parse_json_report(text: &str) -> Result<ReportBundle, ScenarioError> {
    serde_json::from_str(text).map_err(|e| ScenarioError::Decode(e.to_string()))
}

fn human(r: &ReportBundle) -> String {
    use std::fmt::Write as _;

    let a = &r.attribution;
    let s = &r.distribution_summary;
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {} ({})", r.scenario, r.year);
    let _ = writeln!(
        out,
        "natural component: {:.2}%; anthropogenic component: {:.2}% (90% CI [{:.2}, {:.2}]); p = {}",
        a.natural_excess,
        a.anthropogenic_excess,
        s.p05,
        s.p95,
        format_sig(r.p_value, 3)
    );
    let _ = writeln!(out, "total relative risk P/P0: {:.4}", a.total_relative_risk);
    if let Some(p0) = r.baseline_probability {
        let _ = writeln!(
            out,
            "user-supplied baseline P0 = {} (display only, not an estimate): P = {}",
            format_sig(p0, 4),
            format_sig(p0 * a.total_relative_risk, 4)
        );
    }
    let _ = writeln!(
        out,
        "\nanthropogenic excess risk, percent (n = {}, seed = {}):",
        r.provenance.samples, r.provenance.seed
    );
    let _ = writeln!(out, "  mean       {:.2}", s.mean);
    let _ = writeln!(out, "  median     {:.2}", s.median);
    let _ = writeln!(out, "  50% range  [{:.2}, {:.2}]", s.q25, s.q75);
    let _ = writeln!(out, "  90% range  [{:.2}, {:.2}]", s.p05, s.p95);
    let _ = writeln!(out, "  99% range  [{:.2}, {:.2}]", s.p005, s.p995);
    let _ = writeln!(
        out,
        "  P(excess <= {}) = {}",
        format_sig(r.null_threshold, 3),
        format_sig(r.p_value, 3)
    );
    if !r.quantiles.is_empty() {
        let _ = writeln!(out, "quantiles:");
        for q in &r.quantiles {
            let _ = writeln!(out, "  {:<6} {:.2}", q.q, q.value);
        }
    }
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    let _ = writeln!(
        out,
        "provenance: {}, config sha256 {}",
        r.provenance.tool_version, r.provenance.config_digest
    );
    out
}

fn csv(r: &ReportBundle) -> String {
    let f = |x: f64| format_sig(x, CSV_DIGITS);
    let a = &r.attribution;
    let s = &r.distribution_summary;
    let mut rows = vec!["record_type,name,quantile,value,bin_lower,bin_upper,count".to_owned()];
    for (name, v) in [
        ("natural_excess", a.natural_excess),
        ("anthropogenic_excess", a.anthropogenic_excess),
        ("total_relative_risk", a.total_relative_risk),
    ] {
        rows.push(format!("attribution,{name},,{},,,", f(v)));
    }
    for (name, v) in [
        ("mean", s.mean),
        ("null_threshold", r.null_threshold),
        ("p_value", r.p_value),
        ("anthropogenic_exceedance", r.anthropogenic_exceedance),
    ] {
        rows.push(format!("summary,{name},,{},,,", f(v)));
    }
    for q in &r.quantiles {
        rows.push(format!("quantile,,{},{},,,", f(q.q), f(q.value)));
    }
    for b in &r.histogram {
        rows.push(format!("histogram,,,,{},{},{}", f(b.lower), f(b.upper), b.count));
    }
    rows.push(format!("provenance,seed,,{},,,", r.provenance.seed));
    rows.push(format!("provenance,samples,,{},,,", r.provenance.samples));
    let mut out = rows.join("\n");
    out.push('\n');
    out
}

fn json(r: &ReportBundle) -> String {
    render_json(r)
}

/// Pretty JSON with reals rounded to 12 significant digits.
pub fn render_json<T: serde::Serialize>(value: &T) -> String {
    let mut value = serde_json::to_value(value).expect("value is representable as JSON");
    round_floats(&mut value, JSON_DIGITS);
    let mut out = serde_json::to_string_pretty(&value).expect("JSON value serializes");
    out.push('\n');
    out
}

fn round_floats(v: &mut serde_json::Value, digits: usize) {
    use serde_json::Value;
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("checked f64");
            let rounded: f64 = format!("{:.*e}", digits - 1, x)
                .parse()
                .expect("formatted float parses");
            if let Some(num) = serde_json::Number::from_f64(rounded) {
                *n = num;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|x| round_floats(x, digits)),
        Value::Object(map) => map.values_mut().for_each(|x| round_floats(x, digits)),
        _ => {}
    }
}

/// Fixed-point rendering with `digits` significant digits (`0` for zero).
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".to_owned() } else { x.to_string() };
    }
    let decimals = |x: f64| (digits as i32 - 1 - x.abs().log10().floor() as i32).max(0) as usize;
    let d = decimals(x);
    let s = format!("{x:.d$}");
    // Rounding can carry into a new leading digit (9.9999996 -> 10.00000).
    let parsed: f64 = s.parse().unwrap_or(x);
    let d2 = decimals(parsed);
    if d2 < d {
        format!("{x:.d2$}")
    } else {
        s
    }
}
