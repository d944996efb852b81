//! Uncertain quantities, reproducible sampling and empirical distributions.

mod distribution;
mod rng;
mod scalar;

pub use distribution::{BoxWhiskerSummary, EmpiricalDistribution, HistogramBin, Tail, SUMMARY_QUANTILES};
pub use rng::{NormalStream, StreamLabel};
pub use scalar::{Family, UncertainScalar};

use crate::{Error, Execution, Result};

/// Draws `n` values of `q` from `stream`.
///
/// Draw `i` depends only on the stream's seed, its label and `i`, so the
/// output is identical for every [`Execution`] mode.
pub fn sample(q: &UncertainScalar, stream: &NormalStream, n: usize) -> Result<Vec<f64>> {
    sample_with(q, stream, n, Execution::default())
}

pub fn sample_with(q: &UncertainScalar, stream: &NormalStream, n: usize, exec: Execution) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::SampleCount { min: 1, got: 0 });
    }
    q.validate()?;
    let (value, dispersion) = (q.value(), q.dispersion());
    match q.family() {
        Family::Point => Ok(vec![value; n]),
        Family::Normal => {
            let mut out = vec![0.0; n];
            exec.for_each_chunk(&mut out, |offset, chunk| {
                stream.fill_standard_normal(offset as u64, chunk);
                for z in chunk.iter_mut() {
                    *z = value + dispersion * *z;
                }
            });
            Ok(out)
        }
    }
}
