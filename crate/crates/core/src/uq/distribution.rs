use serde::{Deserialize, Serialize};

use crate::{Error, Execution, Result};

/// Quantiles reported by [`EmpiricalDistribution::summarize`].
pub const SUMMARY_QUANTILES: [f64; 7] = [0.005, 0.05, 0.25, 0.5, 0.75, 0.95, 0.995];

/// Median, interquartile, 90-centile and 99-centile ranges plus the mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxWhiskerSummary {
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
    pub p05: f64,
    pub p95: f64,
    pub p005: f64,
    pub p995: f64,
    pub mean: f64,
}

impl BoxWhiskerSummary {
    /// `p005 <= p05 <= q25 <= median <= q75 <= p95 <= p995`.
    pub fn is_ordered(&self) -> bool {
        let chain = [
            self.p005,
            self.p05,
            self.q25,
            self.median,
            self.q75,
            self.p95,
            self.p995,
        ];
        chain.windows(2).all(|w| w[0] <= w[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lower: f64,
    pub upper: f64,
    pub count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    AtOrBelow,
    AtOrAbove,
}

/// A finalized (sorted, finite, at least two samples) sample distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    samples: Vec<f64>,
    seed: u64,
    units: String,
}

impl EmpiricalDistribution {
    pub fn from_samples(samples: Vec<f64>, seed: u64, units: impl Into<String>) -> Result<Self> {
        Self::from_samples_with(samples, seed, units, Execution::default())
    }

    pub fn from_samples_with(
        mut samples: Vec<f64>,
        seed: u64,
        units: impl Into<String>,
        exec: Execution,
    ) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::SampleCount {
                min: 2,
                got: samples.len(),
            });
        }
        if let Some(&bad) = samples.iter().find(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                field: "sample",
                value: bad,
            });
        }
        exec.sort(&mut samples);
        Ok(Self {
            samples,
            seed,
            units: units.into(),
        })
    }

    /// Sorted ascending.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_count(&self) -> usize {
        self.samples.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn units(&self) -> &str {
        &self.units
    }

    pub fn min(&self) -> f64 {
        self.samples[0]
    }

    pub fn max(&self) -> f64 {
        self.samples[self.samples.len() - 1]
    }

    /// Linear interpolation between order statistics at rank `q * (n - 1)`.
    pub fn percentile(&self, q: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::QuantileOutOfRange(q));
        }
        let n = self.samples.len();
        if n == 0 {
            return Err(Error::EmptyDistribution);
        }
        let rank = q * (n - 1) as f64;
        let lo = rank.floor() as usize;
        let hi = rank.ceil().min((n - 1) as f64) as usize;
        let (a, b) = (self.samples[lo], self.samples[hi]);
        if lo == hi || a == b {
            return Ok(a);
        }
        Ok(a + (rank - lo as f64) * (b - a))
    }

    /// Compensated, order-fixed mean (independent of execution mode).
    pub fn mean(&self) -> f64 {
        neumaier_sum(self.samples.iter().copied()) / self.samples.len() as f64
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        let ss = neumaier_sum(self.samples.iter().map(|x| (x - mean) * (x - mean)));
        ss / (self.samples.len() - 1) as f64
    }

    pub fn summarize(&self) -> Result<BoxWhiskerSummary> {
        let [p005, p05, q25, median, q75, p95, p995] = SUMMARY_QUANTILES.map(|q| self.percentile(q));
        Ok(BoxWhiskerSummary {
            median: median?,
            q25: q25?,
            q75: q75?,
            p05: p05?,
            p95: p95?,
            p005: p005?,
            p995: p995?,
            mean: self.mean(),
        })
    }

    /// Fraction of samples at or below (or at or above) `threshold`.
    pub fn tail_probability(&self, threshold: f64, tail: Tail) -> Result<f64> {
        let n = self.samples.len();
        if n == 0 {
            return Err(Error::EmptyDistribution);
        }
        let count = match tail {
            Tail::AtOrBelow => self.samples.partition_point(|&x| x <= threshold),
            Tail::AtOrAbove => n - self.samples.partition_point(|&x| x < threshold),
        };
        Ok(count as f64 / n as f64)
    }

    /// Equal-width bins over `[min, max]`, last upper edge inclusive. A
    /// distribution with zero range yields one degenerate bin.
    pub fn histogram(&self, bin_count: usize) -> Result<Vec<HistogramBin>> {
        if bin_count == 0 {
            return Err(Error::ZeroBins);
        }
        let (min, max) = (self.min(), self.max());
        let total = self.samples.len() as u64;
        if min == max {
            return Ok(vec![HistogramBin {
                lower: min,
                upper: max,
                count: total,
            }]);
        }
        let width = (max - min) / bin_count as f64;
        let mut counts = vec![0u64; bin_count];
        for &x in &self.samples {
            let idx = (((x - min) / width) as usize).min(bin_count - 1);
            counts[idx] += 1;
        }
        Ok(counts
            .into_iter()
            .enumerate()
            .map(|(i, count)| HistogramBin {
                lower: min + i as f64 * width,
                upper: if i + 1 == bin_count {
                    max
                } else {
                    min + (i + 1) as f64 * width
                },
                count,
            })
            .collect())
    }
}

fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
