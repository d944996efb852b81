//! Decomposition of an anomaly's excess risk into natural and anthropogenic
//! terms, and propagation of input uncertainty into attributable risk.
//!
//! With a relative-risk surface `RR(D) = P(D) / P0`, the excess risk splits as
//!
//! ```text
//! RR(D0 + D') - 1 = [RR(D0) - RR(0)] + [RR(D0 + D') - RR(D0)]
//!                    natural           anthropogenic
//! ```
//!
//! and when `dRR/dD` is a constant `beta` this reduces to
//! `RR ≈ 1 + beta·D0 + beta·D'`. All excess-risk terms are carried in
//! percent; relative risks are dimensionless.

mod anomaly;
mod engine;
mod propagate;
pub mod quadrature;
mod surface;

pub use anomaly::{decompose_anomaly, AnomalyDecomposition, ExceedancePolicy};
pub use engine::{
    integral_attribution, integral_attribution_by_quadrature, linear_attribution, DoseResponse, RiskAttribution,
    QUADRATURE_RTOL,
};
pub use propagate::{
    analytic_product_moments, propagate_attribution, propagate_attribution_with, propagate_surface_attribution,
    ProductMoments, Propagation,
};
pub use surface::ResponseSurface;

/// Units label required on a linear dose-response coefficient.
pub const PERCENT_PER_SIGMA: &str = "percent-per-sigma";
/// Units label of anomaly magnitudes.
pub const SIGMA: &str = "sigma";
/// Units label of excess-risk samples.
pub const PERCENT: &str = "percent";
