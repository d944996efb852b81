use serde::{Deserialize, Serialize};

use super::quadrature;
use super::{AnomalyDecomposition, ResponseSurface, PERCENT_PER_SIGMA};
use crate::error::ensure_finite;
use crate::uq::UncertainScalar;
use crate::{Error, Result};

/// Relative tolerance of the quadrature route through `dRR/dD`.
pub const QUADRATURE_RTOL: f64 = 1e-9;

/// Allowed disagreement between the quadrature and direct-difference routes.
const CROSS_CHECK_RTOL: f64 = 1e-8;

/// Point estimates of the decomposed excess risk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskAttribution {
    /// Percent excess relative risk from the natural component.
    pub natural_excess: f64,
    /// Percent excess relative risk from the anthropogenic component.
    pub anthropogenic_excess: f64,
    /// `P / P0`.
    pub total_relative_risk: f64,
}

/// Mapping from anomaly magnitude to relative risk.
#[derive(Debug, Clone, PartialEq)]
pub enum DoseResponse {
    /// Constant percent excess relative risk per σ.
    Linear {
        beta: UncertainScalar,
    },
    Surface(ResponseSurface),
}

impl DoseResponse {
    pub fn linear(beta: UncertainScalar) -> Result<Self> {
        if beta.units() != PERCENT_PER_SIGMA {
            return Err(Error::Units {
                expected: PERCENT_PER_SIGMA,
                found: beta.units().to_owned(),
            });
        }
        Ok(Self::Linear { beta })
    }

    /// Point attribution for this response, dispatching to
    /// [`linear_attribution`] or [`integral_attribution`].
    pub fn attribute(&self, decomp: &AnomalyDecomposition) -> Result<RiskAttribution> {
        match self {
            Self::Linear { beta } => linear_attribution(beta.value(), decomp),
            Self::Surface(surface) => integral_attribution(surface, decomp),
        }
    }
}

/// `P/P0 ≈ 1 + beta·D0 + beta·D'` at the central values of `decomp`.
pub fn linear_attribution(beta: f64, decomp: &AnomalyDecomposition) -> Result<RiskAttribution> {
    ensure_finite("beta", beta)?;
    let natural_excess = beta * decomp.natural();
    let anthropogenic_excess = beta * decomp.anthropogenic().value();
    Ok(RiskAttribution {
        natural_excess,
        anthropogenic_excess,
        total_relative_risk: 1.0 + (natural_excess + anthropogenic_excess) / 100.0,
    })
}

/// Attribution over a relative-risk surface: the change in `RR` across
/// `[0, D0]` (natural) and `[D0, D0 + D']` (anthropogenic).
///
/// The direct differences are returned after cross-checking them against
/// quadrature of `dRR/dD` over the same ranges.
pub fn integral_attribution(surface: &ResponseSurface, decomp: &AnomalyDecomposition) -> Result<RiskAttribution> {
    let d0 = decomp.natural();
    let observed = d0 + decomp.anthropogenic().value();
    let rr_zero = surface.eval(0.0)?;
    let rr_natural = surface.eval(d0)?;
    let rr_observed = surface.eval(observed)?;
    let direct = RiskAttribution {
        natural_excess: 100.0 * (rr_natural - rr_zero),
        anthropogenic_excess: 100.0 * (rr_observed - rr_natural),
        total_relative_risk: rr_observed,
    };

    let by_quadrature = integral_attribution_by_quadrature(surface, decomp)?;
    cross_check("natural_excess", direct.natural_excess, by_quadrature.natural_excess)?;
    cross_check(
        "anthropogenic_excess",
        direct.anthropogenic_excess,
        by_quadrature.anthropogenic_excess,
    )?;
    Ok(direct)
}

/// The quadrature route alone: integrates `dRR/dD` with an adaptive
/// composite rule at [`QUADRATURE_RTOL`], splitting at the knots.
pub fn integral_attribution_by_quadrature(
    surface: &ResponseSurface,
    decomp: &AnomalyDecomposition,
) -> Result<RiskAttribution> {
    let d0 = decomp.natural();
    let observed = d0 + decomp.anthropogenic().value();
    // Domain errors surface here instead of inside the integrand.
    surface.eval(0.0)?;
    surface.eval(d0)?;
    surface.eval(observed)?;
    let slope = |d: f64| surface.derivative(d).unwrap_or(f64::NAN);
    let knots = surface.breakpoints();
    let natural = quadrature::integrate(slope, 0.0, d0, knots, QUADRATURE_RTOL)?;
    let anthropogenic = quadrature::integrate(slope, d0, observed, knots, QUADRATURE_RTOL)?;
    Ok(RiskAttribution {
        natural_excess: 100.0 * natural,
        anthropogenic_excess: 100.0 * anthropogenic,
        total_relative_risk: 1.0 + natural + anthropogenic,
    })
}

fn cross_check(term: &'static str, direct: f64, quadrature: f64) -> Result<()> {
    let scale = direct.abs().max(quadrature.abs());
    if (direct - quadrature).abs() <= CROSS_CHECK_RTOL * scale + 1e-12 {
        Ok(())
    } else {
        Err(Error::CrossCheck {
            term,
            direct,
            quadrature,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attribution::{decompose_anomaly, ExceedancePolicy};

    fn decomp(total: f64, dprime: f64) -> AnomalyDecomposition {
        let d = UncertainScalar::point(dprime, "sigma").unwrap();
        decompose_anomaly(total, d, ExceedancePolicy::Error).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn syria_point_estimates() {
        let r = linear_attribution(3.54, &decomp(2.48, 1.08)).unwrap();
        assert!((r.natural_excess - 4.956).abs() < 1e-12);
        assert!((r.anthropogenic_excess - 3.8232).abs() < 1e-12);
        assert_eq!(
            r.total_relative_risk,
            1.0 + (r.natural_excess + r.anthropogenic_excess) / 100.0
        );
    }

    #[test]
    fn zero_and_temperature_coefficients() {
        let r = linear_attribution(0.0, &decomp(2.48, 1.08)).unwrap();
        assert_eq!(
            r,
            RiskAttribution {
                natural_excess: 0.0,
                anthropogenic_excess: 0.0,
                total_relative_risk: 1.0
            }
        );
        let r = linear_attribution(11.33, &decomp(1.0, 0.0)).unwrap();
        assert_eq!(r.natural_excess, 11.33);
        assert_eq!(r.anthropogenic_excess, 0.0);
        assert!(linear_attribution(f64::NAN, &decomp(1.0, 0.0)).is_err());
    }

    #[test]
    fn linear_surface_matches_linear_rule() {
        let surface = ResponseSurface::linear(3.54, &[0.0, 1.0, 2.0, 3.0]).unwrap();
        let d = decomp(2.48, 1.08);
        let lin = linear_attribution(3.54, &d).unwrap();
        let int = integral_attribution(&surface, &d).unwrap();
        let quad = integral_attribution_by_quadrature(&surface, &d).unwrap();
        for r in [int, quad] {
            assert!(rel(r.natural_excess, lin.natural_excess) < 1e-9);
            assert!(rel(r.anthropogenic_excess, lin.anthropogenic_excess) < 1e-9);
            assert!(rel(r.total_relative_risk, lin.total_relative_risk) < 1e-9);
        }
    }

    #[test]
    fn flat_surface_attributes_nothing() {
        let surface = ResponseSurface::new(&[[0.0, 1.0], [3.0, 1.0]]).unwrap();
        let r = integral_attribution(&surface, &decomp(2.48, 1.08)).unwrap();
        assert_eq!(
            r,
            RiskAttribution {
                natural_excess: 0.0,
                anthropogenic_excess: 0.0,
                total_relative_risk: 1.0
            }
        );
    }

    #[test]
    fn quadratic_surface_against_closed_form() {
        // RR = 1 + 0.01·D²: ∫0.02·D over [0,1] = 0.01, over [1,2] = 0.03.
        let knots: Vec<[f64; 2]> = (0..=6)
            .map(|i| {
                let d = 0.5 * i as f64;
                [d, 1.0 + 0.01 * d * d]
            })
            .collect();
        let surface = ResponseSurface::new(&knots).unwrap();
        let d = decomp(2.0, 1.0);
        for r in [
            integral_attribution(&surface, &d).unwrap(),
            integral_attribution_by_quadrature(&surface, &d).unwrap(),
        ] {
            assert!(rel(r.natural_excess, 1.0) < 1e-8, "{r:?}");
            assert!(rel(r.anthropogenic_excess, 3.0) < 1e-8, "{r:?}");
        }
    }

    #[test]
    fn surface_must_cover_observed_anomaly() {
        let surface = ResponseSurface::linear(3.54, &[0.0, 1.0, 2.0]).unwrap();
        assert!(matches!(
            integral_attribution(&surface, &decomp(2.48, 1.08)),
            Err(Error::DomainCoverage { at, .. }) if at == 2.48
        ));
    }

    #[test]
    fn linear_requires_percent_per_sigma() {
        let beta = UncertainScalar::normal(3.54, 1.2, "percent").unwrap();
        assert!(matches!(DoseResponse::linear(beta), Err(Error::Units { .. })));
    }
}
