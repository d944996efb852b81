use serde::{Deserialize, Serialize};

use crate::error::ensure_finite;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Normal,
    Point,
}

/// A scalar with a central value, a one-standard-deviation dispersion and a
/// distribution family. Units are an opaque label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncertainScalar {
    value: f64,
    dispersion: f64,
    family: Family,
    units: String,
}

impl UncertainScalar {
    /// `N(value, dispersion²)`.
    pub fn normal(value: f64, dispersion: f64, units: impl Into<String>) -> Result<Self> {
        let q = Self {
            value,
            dispersion,
            family: Family::Normal,
            units: units.into(),
        };
        q.validate()?;
        Ok(q)
    }

    /// A point mass at `value`.
    pub fn point(value: f64, units: impl Into<String>) -> Result<Self> {
        let q = Self {
            value,
            dispersion: 0.0,
            family: Family::Point,
            units: units.into(),
        };
        q.validate()?;
        Ok(q)
    }

    /// Normal when `dispersion > 0`, point mass when it is exactly zero.
    pub fn from_spread(value: f64, dispersion: f64, units: impl Into<String>) -> Result<Self> {
        if dispersion == 0.0 {
            Self::point(value, units)
        } else {
            Self::normal(value, dispersion, units)
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        ensure_finite("value", self.value)?;
        ensure_finite("dispersion", self.dispersion)?;
        if self.dispersion < 0.0 {
            return Err(Error::NegativeDispersion(self.dispersion));
        }
        if self.family == Family::Point && self.dispersion != 0.0 {
            return Err(Error::PointWithDispersion(self.dispersion));
        }
        Ok(())
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn dispersion(&self) -> f64 {
        self.dispersion
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn units(&self) -> &str {
        &self.units
    }

    /// Same family and units with value and dispersion multiplied by `k > 0`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        let q = Self {
            value: self.value * k,
            dispersion: self.dispersion * k.abs(),
            ..self.clone()
        };
        q.validate()?;
        Ok(q)
    }
}
