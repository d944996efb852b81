use serde::{Deserialize, Serialize};

use super::{ScenarioConfig, ScenarioError};
use crate::attribution::{propagate_surface_attribution, Propagation, RiskAttribution};
use crate::uq::{BoxWhiskerSummary, HistogramBin, Tail};
use crate::{Execution, TOOL_VERSION};

/// Draw exceedance above which the report carries a warning.
const EXCEEDANCE_WARNING: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantileValue {
    pub q: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub samples: usize,
    pub config_digest: String,
    pub tool_version: String,
}

/// Everything a scenario run reports. Field order is the serialized order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub scenario: String,
    pub year: i32,
    pub attribution: RiskAttribution,
    pub distribution_summary: BoxWhiskerSummary,
    pub quantiles: Vec<QuantileValue>,
    pub null_threshold: f64,
    /// One-sided Monte Carlo p-value: share of draws at or below the null threshold.
    pub p_value: f64,
    pub histogram: Vec<HistogramBin>,
    /// Share of anthropogenic draws larger than the total anomaly.
    pub anthropogenic_exceedance: f64,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline_probability: Option<f64>,
    pub provenance: Provenance,
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ReportBundle, ScenarioError> {
    run_scenario_with(cfg, Execution::default())
}

pub fn run_scenario_with(cfg: &ScenarioConfig, exec: Execution) -> Result<ReportBundle, ScenarioError> {
    run_scenario_detailed(cfg, exec).map(|(bundle, _)| bundle)
}

/// Like [`run_scenario_with`], also returning the full sample distribution.
pub fn run_scenario_detailed(
    cfg: &ScenarioConfig,
    exec: Execution,
) -> Result<(ReportBundle, Propagation), ScenarioError> {
    cfg.validate()?;
    let engine = |source| ScenarioError::Engine {
        scenario: cfg.name.clone(),
        source,
    };

    let decomp = cfg.decomposition().map_err(engine)?;
    let response = cfg.dose_response().map_err(engine)?;
    let attribution = response.attribute(&decomp).map_err(engine)?;
    let propagation =
        propagate_surface_attribution(&response, &decomp, cfg.mc.seed, cfg.mc.samples, exec).map_err(engine)?;

    let dist = &propagation.distribution;
    let distribution_summary = dist.summarize().map_err(engine)?;
    let quantiles = cfg
        .report
        .quantiles
        .iter()
        .map(|&q| dist.percentile(q).map(|value| QuantileValue { q, value }))
        .collect::<Result<Vec<_>, _>>()
        .map_err(engine)?;
    let p_value = dist
        .tail_probability(cfg.report.null_threshold, Tail::AtOrBelow)
        .map_err(engine)?;
    let histogram = dist.histogram(cfg.report.histogram_bins).map_err(engine)?;

    let mut warnings = Vec::new();
    if decomp.anthropogenic_exceeds_total() {
        warnings.push(format!(
            "anthropogenic central value {} exceeds the anomaly total {}; the natural component is negative",
            cfg.anthropogenic.value, cfg.anomaly_total
        ));
    }
    if propagation.anthropogenic_exceedance > EXCEEDANCE_WARNING {
        warnings.push(format!(
            "{:.2}% of anthropogenic draws exceed the anomaly total",
            100.0 * propagation.anthropogenic_exceedance
        ));
    }

    let bundle = ReportBundle {
        scenario: cfg.name.clone(),
        year: cfg.year,
        attribution,
        distribution_summary,
        quantiles,
        null_threshold: cfg.report.null_threshold,
        p_value,
        histogram,
        anthropogenic_exceedance: propagation.anthropogenic_exceedance,
        warnings,
        baseline_probability: cfg.report.baseline_probability,
        provenance: Provenance {
            seed: cfg.mc.seed,
            samples: cfg.mc.samples,
            config_digest: cfg.digest(),
            tool_version: TOOL_VERSION.to_owned(),
        },
    };
    Ok((bundle, propagation))
}
