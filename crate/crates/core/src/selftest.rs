//! Replays the reference drought scenario and checks every headline number
//! against its pinned target and tolerance.
//!
//! Monte Carlo tolerances are calibrated for the default 10⁶ samples. Runs
//! with fewer samples widen them by `sqrt(10⁶ / n)` and mark passes that
//! needed the widening as [`CheckStatus::WidenedPass`].

use std::fmt;

use crate::attribution::{
    decompose_anomaly, integral_attribution, linear_attribution, ExceedancePolicy, ResponseSurface,
};
use crate::scenario::{run_scenario_detailed, DoseResponseConfig, ScenarioConfig, ScenarioError};
use crate::uq::UncertainScalar;
use crate::{Execution, DEFAULT_SAMPLES};

/// Pinned targets and tolerances.
pub mod targets {
    pub const NATURAL_EXCESS: f64 = 4.96;
    pub const NATURAL_EXCESS_TOL: f64 = 0.06;
    pub const ANTHROPOGENIC_EXCESS: f64 = 3.82;
    pub const ANTHROPOGENIC_EXCESS_TOL: f64 = 0.03;
    pub const MEDIAN: f64 = 3.6;
    pub const MEDIAN_TOL: f64 = 0.15;
    pub const P05: f64 = 1.1;
    pub const P95: f64 = 7.3;
    pub const INTERVAL_TOL: f64 = 0.3;
    pub const P_VALUE_CEILING: f64 = 0.01;
    /// `Φ(-1.08/0.37) + Φ(-3.54/1.2)` less the both-negative overlap.
    pub const P_VALUE_ORACLE: f64 = 0.0033;
    pub const P_VALUE_TOL: f64 = 0.001;
    pub const PRODUCT_MEAN: f64 = 3.8232;
    pub const PRODUCT_MEAN_TOL: f64 = 0.01;
    pub const PRODUCT_VARIANCE: f64 = 3.5923;
    pub const PRODUCT_VARIANCE_RTOL: f64 = 0.02;
    pub const LINEARIZATION_RTOL: f64 = 1e-9;
    pub const QUADRATIC_RTOL: f64 = 1e-8;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    /// Passed only under sample-size-widened tolerances.
    WidenedPass,
    Fail,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pass => "PASS",
            Self::WidenedPass => "WIDENED-TOLERANCE",
            Self::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub observed: String,
    pub expected: String,
    pub status: CheckStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfTestReport {
    pub samples: usize,
    pub widening: f64,
    pub checks: Vec<Check>,
}

impl SelfTestReport {
    /// True when no check failed (widened passes count as passes).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn render_table(&self) -> String {
        let mut out = format!(
            "{:<4} {:<18} {:<34} {:<40} {}\n",
            "#", "check", "observed", "expected", "status"
        );
        for (i, c) in self.checks.iter().enumerate() {
            out.push_str(&format!(
                "{:<4} {:<18} {:<34} {:<40} {}\n",
                i + 1,
                c.name,
                c.observed,
                c.expected,
                c.status
            ));
        }
        let passed = self.checks.iter().filter(|c| c.status != CheckStatus::Fail).count();
        out.push_str(&format!(
            "{passed}/{} checks passed (n = {})\n",
            self.checks.len(),
            self.samples
        ));
        out
    }
}

/// Graded comparison: `Pass` within `tol`, `WidenedPass` within
/// `tol * widening`, otherwise `Fail`.
fn grade(deviations: &[(f64, f64)], widening: f64) -> CheckStatus {
    if deviations.iter().all(|&(dev, tol)| dev <= tol) {
        CheckStatus::Pass
    } else if deviations.iter().all(|&(dev, tol)| dev <= tol * widening) {
        CheckStatus::WidenedPass
    } else {
        CheckStatus::Fail
    }
}

fn strict(ok: bool) -> CheckStatus {
    if ok {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    }
}

/// Runs the seven checks against `cfg`, which must use a linear dose response.
pub fn run_selftest(cfg: &ScenarioConfig, exec: Execution) -> Result<SelfTestReport, ScenarioError> {
    use targets::*;

    let DoseResponseConfig::Linear { value: beta, .. } = cfg.dose_response else {
        return Err(ScenarioError::Validation {
            field: "dose_response.kind".into(),
            message: "selftest requires a linear dose response".into(),
        });
    };
    let engine = |source| ScenarioError::Engine {
        scenario: cfg.name.clone(),
        source,
    };
    let samples = cfg.mc.samples;
    let widening = (DEFAULT_SAMPLES as f64 / samples as f64).sqrt().max(1.0);
    let (bundle, propagation) = run_scenario_detailed(cfg, exec)?;
    let a = bundle.attribution;
    let s = bundle.distribution_summary;
    let dist = &propagation.distribution;
    let mut checks = Vec::with_capacity(7);

    checks.push(Check {
        name: "natural_excess",
        observed: format!("{:.4}", a.natural_excess),
        expected: format!("{NATURAL_EXCESS} ± {NATURAL_EXCESS_TOL}"),
        status: strict((a.natural_excess - NATURAL_EXCESS).abs() <= NATURAL_EXCESS_TOL),
    });
    checks.push(Check {
        name: "anthro_excess",
        observed: format!("{:.4}", a.anthropogenic_excess),
        expected: format!("{ANTHROPOGENIC_EXCESS} ± {ANTHROPOGENIC_EXCESS_TOL}"),
        status: strict((a.anthropogenic_excess - ANTHROPOGENIC_EXCESS).abs() <= ANTHROPOGENIC_EXCESS_TOL),
    });
    checks.push(Check {
        name: "median",
        observed: format!("{:.4}", s.median),
        expected: format!("{MEDIAN} ± {MEDIAN_TOL}"),
        status: grade(&[((s.median - MEDIAN).abs(), MEDIAN_TOL)], widening),
    });
    checks.push(Check {
        name: "ci90",
        observed: format!("[{:.4}, {:.4}]", s.p05, s.p95),
        expected: format!("[{P05}, {P95}] ± {INTERVAL_TOL}"),
        status: grade(
            &[((s.p05 - P05).abs(), INTERVAL_TOL), ((s.p95 - P95).abs(), INTERVAL_TOL)],
            widening,
        ),
    });
    let p = bundle.p_value;
    checks.push(Check {
        name: "null_rejection",
        observed: format!("p = {p:.5}"),
        expected: format!("< {P_VALUE_CEILING}, {P_VALUE_ORACLE} ± {P_VALUE_TOL}"),
        status: if p < P_VALUE_CEILING {
            grade(&[((p - P_VALUE_ORACLE).abs(), P_VALUE_TOL)], widening)
        } else {
            CheckStatus::Fail
        },
    });
    let (mean, variance) = (dist.mean(), dist.variance());
    checks.push(Check {
        name: "mc_vs_analytic",
        observed: format!("mean {mean:.4}, var {variance:.4}"),
        expected: format!("mean {PRODUCT_MEAN} ± {PRODUCT_MEAN_TOL}, var {PRODUCT_VARIANCE} ± 2%"),
        status: grade(
            &[
                ((mean - PRODUCT_MEAN).abs(), PRODUCT_MEAN_TOL),
                (
                    (variance - PRODUCT_VARIANCE).abs() / PRODUCT_VARIANCE,
                    PRODUCT_VARIANCE_RTOL,
                ),
            ],
            widening,
        ),
    });

    let (lin_err, quad_err) = linearization_errors(beta, cfg).map_err(engine)?;
    checks.push(Check {
        name: "linearization",
        observed: format!("{lin_err:.1e} / {quad_err:.1e}"),
        expected: format!("< {LINEARIZATION_RTOL:.0e} / < {QUADRATIC_RTOL:.0e}"),
        status: strict(lin_err <= LINEARIZATION_RTOL && quad_err <= QUADRATIC_RTOL),
    });

    Ok(SelfTestReport {
        samples,
        widening,
        checks,
    })
}

/// Largest relative errors of (linear surface vs linear rule, quadratic
/// surface vs closed form).
fn linearization_errors(beta: f64, cfg: &ScenarioConfig) -> crate::Result<(f64, f64)> {
    let rel = |a: f64, b: f64| if b == 0.0 { a.abs() } else { ((a - b) / b).abs() };
    let decomp = cfg.decomposition()?;
    let top = (decomp.total().max(decomp.natural() + decomp.anthropogenic().value())).ceil() + 1.0;
    let grid: Vec<f64> = (0..=top as usize).map(|i| i as f64).collect();
    let surface = ResponseSurface::linear(beta, &grid)?;
    let lin = linear_attribution(beta, &decomp)?;
    let int = integral_attribution(&surface, &decomp)?;
    let lin_err =
        rel(int.natural_excess, lin.natural_excess).max(rel(int.anthropogenic_excess, lin.anthropogenic_excess));

    let knots: Vec<[f64; 2]> = (0..=6)
        .map(|i| {
            let d = 0.5 * i as f64;
            [d, 1.0 + 0.01 * d * d]
        })
        .collect();
    let quadratic = ResponseSurface::new(&knots)?;
    let unit = decompose_anomaly(2.0, UncertainScalar::point(1.0, "sigma")?, ExceedancePolicy::Error)?;
    let q = integral_attribution(&quadratic, &unit)?;
    let quad_err = rel(q.natural_excess, 1.0).max(rel(q.anthropogenic_excess, 3.0));
    Ok((lin_err, quad_err))
}
