//! Monte Carlo propagation of input uncertainty into attributable risk.

use super::{AnomalyDecomposition, DoseResponse, ResponseSurface, PERCENT};
use crate::uq::{self, EmpiricalDistribution, Family, NormalStream, StreamLabel, UncertainScalar};
use crate::{Error, Execution, Result};

/// Distribution of anthropogenic excess risk plus diagnostics of the draws.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagation {
    pub distribution: EmpiricalDistribution,
    /// Fraction of anthropogenic draws larger than the total anomaly, i.e.
    /// draws that imply a negative natural component.
    pub anthropogenic_exceedance: f64,
}

/// Draws `beta` and `dprime` independently (substreams of one seed) and
/// returns the distribution of `beta_i · dprime_i` in percent.
pub fn propagate_attribution(
    beta: &UncertainScalar,
    dprime: &UncertainScalar,
    seed: u64,
    n: usize,
) -> Result<EmpiricalDistribution> {
    propagate_attribution_with(beta, dprime, seed, n, Execution::default())
}

pub fn propagate_attribution_with(
    beta: &UncertainScalar,
    dprime: &UncertainScalar,
    seed: u64,
    n: usize,
    exec: Execution,
) -> Result<EmpiricalDistribution> {
    let (products, _) = linear_products(beta, dprime, seed, n, exec)?;
    EmpiricalDistribution::from_samples_with(products, seed, PERCENT, exec)
}

/// Propagation for either kind of dose response.
///
/// For a surface the natural component stays fixed and each anthropogenic
/// draw maps to `100·(RR(D0 + D'_i) - RR(D0))`; draws beyond the knot range
/// follow the surface's linear end extension.
pub fn propagate_surface_attribution(
    response: &DoseResponse,
    decomp: &AnomalyDecomposition,
    seed: u64,
    n: usize,
    exec: Execution,
) -> Result<Propagation> {
    match response {
        DoseResponse::Linear { beta } => {
            let (products, dprime) = linear_products(beta, decomp.anthropogenic(), seed, n, exec)?;
            Ok(Propagation {
                anthropogenic_exceedance: exceedance(&dprime, decomp.total()),
                distribution: EmpiricalDistribution::from_samples_with(products, seed, PERCENT, exec)?,
            })
        }
        DoseResponse::Surface(surface) => surface_products(surface, decomp, seed, n, exec),
    }
}

fn surface_products(
    surface: &ResponseSurface,
    decomp: &AnomalyDecomposition,
    seed: u64,
    n: usize,
    exec: Execution,
) -> Result<Propagation> {
    check_count(n)?;
    let d0 = decomp.natural();
    let rr_natural = surface.eval(d0)?;
    let dprime = draw(decomp.anthropogenic(), seed, StreamLabel::ANTHROPOGENIC, n, exec)?;
    let excess = exec.zip_map(&dprime, &dprime, |d, _| {
        100.0 * (surface.eval_extended(d0 + d) - rr_natural)
    });
    Ok(Propagation {
        anthropogenic_exceedance: exceedance(&dprime, decomp.total()),
        distribution: EmpiricalDistribution::from_samples_with(excess, seed, PERCENT, exec)?,
    })
}

fn linear_products(
    beta: &UncertainScalar,
    dprime: &UncertainScalar,
    seed: u64,
    n: usize,
    exec: Execution,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_count(n)?;
    let betas = draw(beta, seed, StreamLabel::DOSE_RESPONSE, n, exec)?;
    let dprimes = draw(dprime, seed, StreamLabel::ANTHROPOGENIC, n, exec)?;
    let products = exec.zip_map(&betas, &dprimes, |b, d| b * d);
    Ok((products, dprimes))
}

fn draw(q: &UncertainScalar, seed: u64, label: StreamLabel, n: usize, exec: Execution) -> Result<Vec<f64>> {
    uq::sample_with(q, &NormalStream::new(seed, label), n, exec)
}

fn check_count(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::SampleCount { min: 2, got: n })
    } else {
        Ok(())
    }
}

fn exceedance(dprime: &[f64], total: f64) -> f64 {
    dprime.iter().filter(|&&d| d > total).count() as f64 / dprime.len() as f64
}

/// Exact mean and variance of the product of two independent normals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductMoments {
    pub mean: f64,
    pub variance: f64,
}

pub fn analytic_product_moments(a: &UncertainScalar, b: &UncertainScalar) -> Result<ProductMoments> {
    if a.family() != Family::Normal || b.family() != Family::Normal {
        return Err(Error::NotNormal("analytic_product_moments"));
    }
    let (ma, sa) = (a.value(), a.dispersion());
    let (mb, sb) = (b.value(), b.dispersion());
    Ok(ProductMoments {
        mean: ma * mb,
        variance: ma * ma * sb * sb + mb * mb * sa * sa + sa * sa * sb * sb,
    })
}
