use serde::{Deserialize, Serialize};

use crate::error::ensure_finite;
use crate::uq::UncertainScalar;
use crate::{Error, Result};

/// How [`decompose_anomaly`] treats a central anthropogenic value larger
/// than the total anomaly (which implies a negative natural component).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExceedancePolicy {
    /// Accept; [`AnomalyDecomposition::anthropogenic_exceeds_total`] flags it.
    #[default]
    Warn,
    Error,
}

/// An anomaly (σ units, positive = adverse) split into natural and
/// anthropogenic parts. The natural part carries no dispersion.
#[derive(Debug, Clone, PartialEq)]
pub struct AnomalyDecomposition {
    total: f64,
    anthropogenic: UncertainScalar,
    natural: f64,
}

impl AnomalyDecomposition {
    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn anthropogenic(&self) -> &UncertainScalar {
        &self.anthropogenic
    }

    pub fn natural(&self) -> f64 {
        self.natural
    }

    pub fn anthropogenic_exceeds_total(&self) -> bool {
        self.anthropogenic.value() > self.total
    }
}

/// `natural = total - anthropogenic.value`.
pub fn decompose_anomaly(
    total: f64,
    anthropogenic: UncertainScalar,
    policy: ExceedancePolicy,
) -> Result<AnomalyDecomposition> {
    ensure_finite("anomaly total", total)?;
    anthropogenic.validate()?;
    if total < 0.0 {
        return Err(Error::SignConvention(total));
    }
    if anthropogenic.value() > total && policy == ExceedancePolicy::Error {
        return Err(Error::AnthropogenicExceedsTotal {
            total,
            anthropogenic: anthropogenic.value(),
        });
    }
    Ok(AnomalyDecomposition {
        total,
        natural: total - anthropogenic.value(),
        anthropogenic,
    })
}
