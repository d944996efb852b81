use attrisk::uq::{sample, sample_with, EmpiricalDistribution, NormalStream, StreamLabel, UncertainScalar};
use attrisk::Execution;
use statrs::distribution::{ContinuousCDF, Normal};

const N: usize = 1_000_000;

fn stream(seed: u64) -> NormalStream {
    NormalStream::new(seed, StreamLabel::ANTHROPOGENIC)
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[test]
fn point_quantity_repeats_value() {
    let q = UncertainScalar::point(3.54, "percent-per-sigma").unwrap();
    assert_eq!(sample(&q, &stream(1), 3).unwrap(), vec![3.54, 3.54, 3.54]);
}

#[test]
fn rejects_zero_draws() {
    let q = UncertainScalar::normal(0.0, 1.0, "sigma").unwrap();
    assert!(sample(&q, &stream(1), 0).is_err());
}

#[test]
fn standard_normal_moments() {
    let q = UncertainScalar::normal(0.0, 1.0, "sigma").unwrap();
    for seed in [1, 20_150_302] {
        let xs = sample(&q, &stream(seed), N).unwrap();
        let (mean, sd) = mean_sd(&xs);
        // 5 standard errors: 5/sqrt(n) = 0.005 and 5/sqrt(2n) ≈ 0.0035.
        assert!(mean.abs() < 0.005, "mean {mean}");
        assert!((sd - 1.0).abs() < 0.005, "sd {sd}");
        assert!((sd - 1.0).abs() < 5.0 / (2.0 * N as f64).sqrt(), "sd {sd}");
    }
}

#[test]
fn lower_tail_matches_normal_cdf_oracle() {
    let oracle = Normal::new(0.0, 1.0).unwrap().cdf(-1.08 / 0.37);
    assert!((oracle - 0.00176).abs() < 5e-6, "oracle {oracle}");
    let q = UncertainScalar::normal(1.08, 0.37, "sigma").unwrap();
    let xs = sample(&q, &stream(20_150_302), N).unwrap();
    let frac = xs.iter().filter(|&&x| x <= 0.0).count() as f64 / N as f64;
    assert!((frac - 0.00176).abs() < 0.0005, "fraction {frac}");
}

#[test]
fn parallel_and_sequential_are_bit_identical() {
    let q = UncertainScalar::normal(1.08, 0.37, "sigma").unwrap();
    let a = sample_with(&q, &stream(7), 100_003, Execution::Sequential).unwrap();
    let b = sample_with(&q, &stream(7), 100_003, Execution::Parallel).unwrap();
    assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
    // Prefixes agree: draw i does not depend on n.
    let c = sample_with(&q, &stream(7), 1000, Execution::Parallel).unwrap();
    assert_eq!(&a[..1000], &c[..]);
}

#[test]
fn thread_count_does_not_change_draws() {
    let q = UncertainScalar::normal(0.0, 1.0, "sigma").unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| sample_with(&q, &stream(3), 200_000, Execution::Parallel).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn normal_histogram_mode_sits_at_zero() {
    let q = UncertainScalar::normal(0.0, 1.0, "sigma").unwrap();
    let d = EmpiricalDistribution::from_samples(sample(&q, &stream(11), N).unwrap(), 11, "sigma").unwrap();
    let bins = d.histogram(100).unwrap();
    assert_eq!(bins.iter().map(|b| b.count).sum::<u64>(), N as u64);
    // Neighbouring bins near the peak differ by less than their Poisson
    // noise, so the zero bin must be modal up to that noise and the
    // observed mode at most one bin away from zero.
    let mode = bins.iter().max_by_key(|b| b.count).unwrap();
    let zero = bins.iter().find(|b| b.lower <= 0.0 && b.upper >= 0.0).unwrap();
    let noise = 4.0 * (mode.count as f64).sqrt();
    assert!(
        (mode.count - zero.count) as f64 <= noise,
        "zero bin {zero:?}, mode {mode:?}"
    );
    let width = mode.upper - mode.lower;
    assert!(mode.lower <= width && mode.upper >= -width, "mode bin {mode:?}");
}
