//! Adaptive composite Simpson quadrature.

use crate::{Error, Result};

const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` to relative tolerance `rtol`, splitting the
/// range at `breakpoints` that fall strictly inside it. Reversed bounds
/// give the negated integral.
pub fn integrate<F>(f: F, a: f64, b: f64, breakpoints: &[f64], rtol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate(f, b, a, breakpoints, rtol).map(|v| -v);
    }
    let mut edges = vec![a];
    edges.extend(breakpoints.iter().copied().filter(|&x| x > a && x < b));
    edges.push(b);

    // A coarse pass fixes the absolute error budget for every panel.
    let coarse: f64 = edges.windows(2).map(|w| simpson(&f, w[0], w[1]).2).sum();
    let scale = edges
        .windows(2)
        .map(|w| simpson_abs(&f, w[0], w[1]))
        .sum::<f64>()
        .max(coarse.abs());
    let budget = rtol * scale;
    let span = b - a;

    let mut total = 0.0;
    for w in edges.windows(2) {
        let (fa, fm, whole) = simpson(&f, w[0], w[1]);
        let fb = f(w[1]);
        let eps = budget * (w[1] - w[0]) / span;
        total += refine(&f, w[0], w[1], fa, fm, fb, whole, eps, MAX_DEPTH).ok_or(Error::QuadratureDivergence {
            a: w[0],
            b: w[1],
            tol: rtol,
        })?;
    }
    Ok(total)
}

/// Returns `(f(a), f(mid), simpson estimate)`.
fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    (fa, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
}

fn simpson_abs<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (f(a).abs() + 4.0 * f(0.5 * (a + b)).abs() + f(b).abs())
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> Option<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        return None;
    }
    if delta.abs() <= 15.0 * eps {
        return Some(left + right + delta / 15.0);
    }
    if depth == 0 {
        return None;
    }
    Some(
        refine(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)?
            + refine(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let v = integrate(|x| 0.02 * x, 1.0, 2.0, &[], 1e-12).unwrap();
        assert!((v - 0.03).abs() < 1e-15);
        let v = integrate(|x| x * x * x, 0.0, 2.0, &[], 1e-12).unwrap();
        assert!((v - 4.0).abs() < 1e-13);
    }

    #[test]
    fn smooth_function_to_tolerance() {
        let v = integrate(f64::sin, 0.0, std::f64::consts::PI, &[], 1e-10).unwrap();
        assert!((v - 2.0).abs() < 2e-10);
        let v = integrate(f64::exp, 0.0, 1.0, &[], 1e-10).unwrap();
        assert!((v - (1f64.exp() - 1.0)).abs() / (1f64.exp() - 1.0) < 1e-10);
    }

    #[test]
    fn kinks_at_breakpoints() {
        let f = |x: f64| (x - 0.3).abs();
        let exact = 0.5 * 0.3 * 0.3 + 0.5 * 0.7 * 0.7;
        let v = integrate(f, 0.0, 1.0, &[0.3], 1e-12).unwrap();
        assert!((v - exact).abs() < 1e-15);
    }

    #[test]
    fn reversed_and_empty_ranges() {
        assert_eq!(integrate(|x| x, 2.0, 2.0, &[], 1e-9).unwrap(), 0.0);
        let v = integrate(|x| x, 1.0, 0.0, &[], 1e-9).unwrap();
        assert!((v + 0.5).abs() < 1e-15);
        assert_eq!(integrate(|_| 0.0, 0.0, 3.0, &[], 1e-9).unwrap(), 0.0);
    }

    #[test]
    fn non_finite_integrand_fails() {
        let r = integrate(|x: f64| 1.0 / x, -1.0, 1.0, &[], 1e-9);
        assert!(matches!(r, Err(Error::QuadratureDivergence { .. })));
    }
}
