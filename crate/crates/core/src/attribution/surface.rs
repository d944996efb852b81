//! Monotone piecewise-cubic (Fritsch-Carlson PCHIP) relative-risk surface.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `RR(0)` must equal one to within this absolute tolerance.
const UNIT_AT_ZERO_TOL: f64 = 1e-12;

/// Relative risk `P(D) / P0` as a function of anomaly magnitude, defined by
/// knots and interpolated with a shape-preserving Hermite cubic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct ResponseSurface {
    anomaly: Vec<f64>,
    relative_risk: Vec<f64>,
    slopes: Vec<f64>,
}

impl ResponseSurface {
    /// Knots are `(anomaly, relative risk)` pairs, strictly increasing in
    /// anomaly, covering 0 with `RR(0) = 1`.
    pub fn new(knots: &[[f64; 2]]) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidSurface(format!(
                "need at least 2 knots, got {}",
                knots.len()
            )));
        }
        for (i, [d, rr]) in knots.iter().enumerate() {
            if !d.is_finite() || !rr.is_finite() {
                return Err(Error::InvalidSurface(format!("knot {i} is not finite")));
            }
            if *rr <= 0.0 {
                return Err(Error::InvalidSurface(format!(
                    "knot {i} has non-positive relative risk {rr}"
                )));
            }
        }
        if let Some(i) = knots.windows(2).position(|w| w[1][0] <= w[0][0]) {
            return Err(Error::InvalidSurface(format!(
                "anomaly knots must be strictly increasing (knot {} = {} follows {})",
                i + 1,
                knots[i + 1][0],
                knots[i][0]
            )));
        }
        let anomaly: Vec<f64> = knots.iter().map(|k| k[0]).collect();
        let relative_risk: Vec<f64> = knots.iter().map(|k| k[1]).collect();
        let slopes = pchip_slopes(&anomaly, &relative_risk);
        let surface = Self {
            anomaly,
            relative_risk,
            slopes,
        };
        let at_zero = surface.eval(0.0).map_err(|_| {
            let (lo, hi) = surface.domain();
            Error::InvalidSurface(format!("knots span [{lo}, {hi}] and do not cover anomaly 0"))
        })?;
        if (at_zero - 1.0).abs() > UNIT_AT_ZERO_TOL {
            return Err(Error::InvalidSurface(format!(
                "relative risk at anomaly 0 is {at_zero}, expected 1"
            )));
        }
        Ok(surface)
    }

    /// The surface `RR(D) = 1 + beta·D / 100` sampled at `anomaly_knots`.
    pub fn linear(beta_percent: f64, anomaly_knots: &[f64]) -> Result<Self> {
        let knots: Vec<[f64; 2]> = anomaly_knots
            .iter()
            .map(|&d| [d, 1.0 + beta_percent * d / 100.0])
            .collect();
        Self::new(&knots)
    }

    pub fn knots(&self) -> Vec<[f64; 2]> {
        self.anomaly
            .iter()
            .zip(&self.relative_risk)
            .map(|(&d, &rr)| [d, rr])
            .collect()
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.anomaly[0], self.anomaly[self.anomaly.len() - 1])
    }

    /// Interior knot positions, useful as quadrature breakpoints.
    pub fn breakpoints(&self) -> &[f64] {
        &self.anomaly
    }

    fn check_domain(&self, d: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        if d >= lo && d <= hi {
            Ok(())
        } else {
            Err(Error::DomainCoverage { lo, hi, at: d })
        }
    }

    fn segment(&self, d: f64) -> usize {
        let n = self.anomaly.len();
        self.anomaly.partition_point(|&k| k <= d).saturating_sub(1).min(n - 2)
    }

    pub fn eval(&self, d: f64) -> Result<f64> {
        self.check_domain(d)?;
        Ok(self.hermite(d))
    }

    /// `dRR/dD` of the interpolant.
    pub fn derivative(&self, d: f64) -> Result<f64> {
        self.check_domain(d)?;
        let i = self.segment(d);
        let h = self.anomaly[i + 1] - self.anomaly[i];
        let t = (d - self.anomaly[i]) / h;
        let dh00 = 6.0 * t * t - 6.0 * t;
        let dh10 = 3.0 * t * t - 4.0 * t + 1.0;
        let dh01 = -dh00;
        let dh11 = 3.0 * t * t - 2.0 * t;
        Ok((dh00 * self.relative_risk[i] + dh01 * self.relative_risk[i + 1]) / h
            + dh10 * self.slopes[i]
            + dh11 * self.slopes[i + 1])
    }

    /// Like [`eval`](Self::eval), but continues linearly with the end slopes
    /// outside the knot range.
    pub fn eval_extended(&self, d: f64) -> f64 {
        let (lo, hi) = self.domain();
        let last = self.anomaly.len() - 1;
        if d < lo {
            self.relative_risk[0] + self.slopes[0] * (d - lo)
        } else if d > hi {
            self.relative_risk[last] + self.slopes[last] * (d - hi)
        } else {
            self.hermite(d)
        }
    }

    fn hermite(&self, d: f64) -> f64 {
        let i = self.segment(d);
        let (x0, x1) = (self.anomaly[i], self.anomaly[i + 1]);
        if d == x1 {
            return self.relative_risk[i + 1];
        }
        let h = x1 - x0;
        let t = (d - x0) / h;
        // h00 = 1 - h01, so constant data is reproduced exactly.
        let h10 = t * (1.0 - t) * (1.0 - t);
        let h01 = t * t * (3.0 - 2.0 * t);
        let h11 = t * t * (t - 1.0);
        let (y0, y1) = (self.relative_risk[i], self.relative_risk[i + 1]);
        y0 + h01 * (y1 - y0) + h * (h10 * self.slopes[i] + h11 * self.slopes[i + 1])
    }
}

impl TryFrom<Vec<[f64; 2]>> for ResponseSurface {
    type Error = Error;

    fn try_from(knots: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(&knots)
    }
}

impl From<ResponseSurface> for Vec<[f64; 2]> {
    fn from(s: ResponseSurface) -> Self {
        s.knots()
    }
}

/// Fritsch-Carlson knot derivatives: weighted harmonic mean of adjacent
/// secants in the interior, zero at local extrema, shape-preserving
/// three-point formula at the ends.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let secant: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    if n == 2 {
        return vec![secant[0]; 2];
    }
    let mut m = vec![0.0; n];
    for i in 1..n - 1 {
        let (a, b) = (secant[i - 1], secant[i]);
        if a == 0.0 || b == 0.0 || a.signum() != b.signum() {
            continue;
        }
        let w1 = 2.0 * h[i] + h[i - 1];
        let w2 = h[i] + 2.0 * h[i - 1];
        m[i] = (w1 + w2) / (w1 / a + w2 / b);
    }
    m[0] = end_slope(h[0], h[1], secant[0], secant[1]);
    m[n - 1] = end_slope(h[n - 2], h[n - 3], secant[n - 2], secant[n - 3]);
    m
}

fn end_slope(h0: f64, h1: f64, s0: f64, s1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if d.signum() != s0.signum() || s0 == 0.0 {
        0.0
    } else if s0.signum() != s1.signum() && d.abs() > 3.0 * s0.abs() {
        3.0 * s0
    } else {
        d
    }
}
