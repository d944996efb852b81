use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ScenarioError;
use crate::attribution::{
    decompose_anomaly, AnomalyDecomposition, DoseResponse, ExceedancePolicy, ResponseSurface, PERCENT_PER_SIGMA, SIGMA,
};
use crate::uq::UncertainScalar;
use crate::{DEFAULT_SAMPLES, DEFAULT_SEED};

pub const DEFAULT_QUANTILES: [f64; 7] = crate::uq::SUMMARY_QUANTILES;
pub const DEFAULT_HISTOGRAM_BINS: usize = 80;

/// Scenario files shipped with the crate, by name.
pub const BUNDLED: &[(&str, &str)] = &[
    ("syria_2010", include_str!("../../../../scenarios/syria_2010.toml")),
    (
        "syria_2010_temperature_illustrative",
        include_str!("../../../../scenarios/syria_2010_temperature_illustrative.toml"),
    ),
];

pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

/// A validated scenario with every default filled in.
///
/// Serializing this back to TOML and loading it again yields an equal value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub year: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    /// Observed anomaly in σ, positive = adverse.
    pub anomaly_total: f64,
    /// Anthropogenic share of the anomaly in σ.
    pub anthropogenic: Spread,
    pub dose_response: DoseResponseConfig,
    #[serde(default)]
    pub mc: McConfig,
    #[serde(default)]
    pub report: ReportConfig,
    #[serde(default)]
    pub validation: ValidationConfig,
}

/// Central value and one-standard-deviation dispersion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Spread {
    pub value: f64,
    #[serde(default)]
    pub dispersion: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DoseResponseConfig {
    /// Percent excess relative risk per σ.
    Linear {
        value: f64,
        #[serde(default)]
        dispersion: f64,
        #[serde(default = "percent_per_sigma")]
        units: String,
    },
    /// `[anomaly, relative risk]` knots.
    Surface { knots: Vec<[f64; 2]> },
}

fn percent_per_sigma() -> String {
    PERCENT_PER_SIGMA.to_owned()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McConfig {
    pub seed: u64,
    pub samples: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportConfig {
    pub quantiles: Vec<f64>,
    pub histogram_bins: usize,
    /// Threshold of the one-sided zero-effect test.
    pub null_threshold: f64,
    /// Optional baseline probability, used only to display absolute
    /// probabilities next to relative risks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline_probability: Option<f64>,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            quantiles: DEFAULT_QUANTILES.to_vec(),
            histogram_bins: DEFAULT_HISTOGRAM_BINS,
            null_threshold: 0.0,
            baseline_probability: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidationConfig {
    pub anthropogenic_exceeds_total: ExceedancePolicy,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.name.trim().is_empty() {
            return Err(ScenarioError::validation("name", "must not be empty"));
        }
        finite("anomaly_total", self.anomaly_total)?;
        if self.anomaly_total < 0.0 {
            return Err(ScenarioError::validation(
                "anomaly_total",
                format!("must be >= 0 (positive = adverse), got {}", self.anomaly_total),
            ));
        }
        spread("anthropogenic", &self.anthropogenic)?;
        match &self.dose_response {
            DoseResponseConfig::Linear {
                value,
                dispersion,
                units,
            } => {
                spread(
                    "dose_response",
                    &Spread {
                        value: *value,
                        dispersion: *dispersion,
                    },
                )?;
                if units != PERCENT_PER_SIGMA {
                    return Err(ScenarioError::validation(
                        "dose_response.units",
                        format!("must be `{PERCENT_PER_SIGMA}`, got `{units}`"),
                    ));
                }
            }
            DoseResponseConfig::Surface { knots } => {
                ResponseSurface::new(knots)
                    .map_err(|e| ScenarioError::validation("dose_response.knots", e.to_string()))?;
            }
        }
        if self.mc.samples < 2 {
            return Err(ScenarioError::validation(
                "mc.samples",
                format!("must be at least 2, got {}", self.mc.samples),
            ));
        }
        let q = &self.report.quantiles;
        if let Some(bad) = q.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(ScenarioError::validation(
                "report.quantiles",
                format!("{bad} is outside [0, 1]"),
            ));
        }
        if q.windows(2).any(|w| w[1] < w[0]) {
            return Err(ScenarioError::validation(
                "report.quantiles",
                "must be sorted ascending",
            ));
        }
        if self.report.histogram_bins == 0 {
            return Err(ScenarioError::validation("report.histogram_bins", "must be at least 1"));
        }
        finite("report.null_threshold", self.report.null_threshold)?;
        if let Some(p0) = self.report.baseline_probability {
            if !(p0 > 0.0 && p0 <= 1.0) {
                return Err(ScenarioError::validation(
                    "report.baseline_probability",
                    format!("must be in (0, 1], got {p0}"),
                ));
            }
        }
        Ok(())
    }

    pub fn anthropogenic_scalar(&self) -> Result<UncertainScalar, crate::Error> {
        UncertainScalar::from_spread(self.anthropogenic.value, self.anthropogenic.dispersion, SIGMA)
    }

    pub fn decomposition(&self) -> Result<AnomalyDecomposition, crate::Error> {
        decompose_anomaly(
            self.anomaly_total,
            self.anthropogenic_scalar()?,
            self.validation.anthropogenic_exceeds_total,
        )
    }

    pub fn dose_response(&self) -> Result<DoseResponse, crate::Error> {
        match &self.dose_response {
            DoseResponseConfig::Linear {
                value,
                dispersion,
                units,
            } => DoseResponse::linear(UncertainScalar::from_spread(*value, *dispersion, units.as_str())?),
            DoseResponseConfig::Surface { knots } => Ok(DoseResponse::Surface(ResponseSurface::new(knots)?)),
        }
    }

    /// Canonical TOML rendering.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario config is always representable as TOML")
    }

    /// Hex SHA-256 of the compact JSON encoding of the validated config
    /// (fields in declaration order, floats in shortest round-trip form).
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("scenario config is always representable as JSON");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn finite(field: &str, x: f64) -> Result<(), ScenarioError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(ScenarioError::validation(field, format!("must be finite, got {x}")))
    }
}

fn spread(field: &str, s: &Spread) -> Result<(), ScenarioError> {
    finite(&format!("{field}.value"), s.value)?;
    finite(&format!("{field}.dispersion"), s.dispersion)?;
    if s.dispersion < 0.0 {
        return Err(ScenarioError::validation(
            format!("{field}.dispersion"),
            format!("must be >= 0, got {}", s.dispersion),
        ));
    }
    Ok(())
}

/// A `dotted.key=value` assignment applied to the raw scenario document
/// before validation. The value is read as a TOML literal, falling back to a
/// bare string.
#[derive(Debug, Clone, PartialEq)]
pub struct Override {
    spec: String,
    path: Vec<String>,
    value: toml::Value,
}

impl Override {
    pub fn new(key: &str, value: toml::Value) -> Result<Self, ScenarioError> {
        let spec = format!("{key}={value}");
        let path: Vec<String> = key.split('.').map(|s| s.trim().to_owned()).collect();
        if path.iter().any(|s| s.is_empty()) {
            return Err(ScenarioError::Override {
                spec,
                message: "empty path segment".into(),
            });
        }
        Ok(Self { spec, path, value })
    }

    fn apply(&self, doc: &mut toml::Table) -> Result<(), ScenarioError> {
        let (last, parents) = self.path.split_last().expect("path is non-empty");
        let mut table = doc;
        for (depth, key) in parents.iter().enumerate() {
            let entry = table
                .entry(key.clone())
                .or_insert_with(|| toml::Value::Table(toml::Table::new()));
            table = entry.as_table_mut().ok_or_else(|| ScenarioError::Override {
                spec: self.spec.clone(),
                message: format!("`{}` is not a table", self.path[..=depth].join(".")),
            })?;
        }
        table.insert(last.clone(), self.value.clone());
        Ok(())
    }
}

impl FromStr for Override {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (key, raw) = s.split_once('=').ok_or_else(|| ScenarioError::Override {
            spec: s.to_owned(),
            message: "expected KEY=VALUE".into(),
        })?;
        let raw = raw.trim();
        let value = format!("v = {raw}")
            .parse::<toml::Table>()
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(raw.to_owned()));
        let mut o = Self::new(key.trim(), value)?;
        o.spec = s.to_owned();
        Ok(o)
    }
}

/// Adjustments applied between parsing and validation.
#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Applied in order after the file is parsed.
    pub overrides: Vec<Override>,
    /// Used for `mc.seed` only when neither the file nor an override sets it.
    pub fallback_seed: Option<u64>,
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<ScenarioConfig, ScenarioError> {
    load_scenario_with(path, &LoadOptions::default())
}

pub fn load_scenario_with(path: impl AsRef<Path>, opts: &LoadOptions) -> Result<ScenarioConfig, ScenarioError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            ScenarioError::NotFound(path.to_owned())
        } else {
            ScenarioError::Io {
                path: path.to_owned(),
                source,
            }
        }
    })?;
    parse_scenario(&text, opts)
}

/// Finds a scenario by path, by path with `.toml` appended, or by bundled
/// name (`syria_2010` or `scenarios/syria_2010`). Returns the text and a
/// label for messages.
pub fn resolve_scenario(spec: &str) -> Result<(String, String), ScenarioError> {
    let read = |p: &Path| {
        std::fs::read_to_string(p).map_err(|source| ScenarioError::Io {
            path: p.to_owned(),
            source,
        })
    };
    let direct = PathBuf::from(spec);
    if direct.is_file() {
        return Ok((read(&direct)?, spec.to_owned()));
    }
    let with_ext = PathBuf::from(format!("{spec}.toml"));
    if with_ext.is_file() {
        return Ok((read(&with_ext)?, with_ext.display().to_string()));
    }
    let name = spec.strip_prefix("scenarios/").unwrap_or(spec);
    let name = name.strip_suffix(".toml").unwrap_or(name);
    if let Some(text) = bundled(name) {
        return Ok((text.to_owned(), format!("bundled:{name}")));
    }
    Err(ScenarioError::NotFound(direct))
}

pub fn parse_scenario(text: &str, opts: &LoadOptions) -> Result<ScenarioConfig, ScenarioError> {
    let mut doc: toml::Table = text.parse().map_err(|e| toml_error(text, &e))?;
    let pristine = opts.overrides.is_empty() && (opts.fallback_seed.is_none() || has_seed(&doc));
    let cfg: ScenarioConfig = if pristine {
        toml::from_str(text).map_err(|e| toml_error(text, &e))?
    } else {
        for o in &opts.overrides {
            o.apply(&mut doc)?;
        }
        if let Some(seed) = opts.fallback_seed.filter(|_| !has_seed(&doc)) {
            let seed = i64::try_from(seed).map_err(|_| ScenarioError::validation("mc.seed", "exceeds i64 range"))?;
            Override::new("mc.seed", toml::Value::Integer(seed))?.apply(&mut doc)?;
        }
        ScenarioConfig::deserialize(toml::Value::Table(doc)).map_err(|e| toml_error("", &e))?
    };
    cfg.validate()?;
    Ok(cfg)
}

fn has_seed(doc: &toml::Table) -> bool {
    doc.get("mc")
        .and_then(|mc| mc.as_table())
        .is_some_and(|mc| mc.contains_key("seed"))
}

fn toml_error(text: &str, e: &toml::de::Error) -> ScenarioError {
    let message = e.message().trim().to_owned();
    if message.contains("unknown field") || message.contains("unknown variant") {
        return ScenarioError::UnknownKey(match e.span() {
            Some(span) => {
                let (line, column) = line_col(text, span.start);
                format!("{message} (line {line}, column {column})")
            }
            None => message,
        });
    }
    let (line, column) = e.span().map(|s| line_col(text, s.start)).unwrap_or((0, 0));
    ScenarioError::Parse { line, column, message }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.chars().rev().take_while(|&c| c != '\n').count() + 1;
    (line, column)
}
