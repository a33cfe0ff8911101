//! Composite Gauss–Legendre quadrature with panel doubling.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const ORDER: usize = 24;
const MAX_DOUBLINGS: u32 = 12;

/// Nodes and weights of the `ORDER`-point rule on `[-1, 1]`.
fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(ORDER))
}

/// Gauss–Legendre nodes and weights by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            dp = n as f64 * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn composite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let (nodes, weights) = rule();
    let h = (b - a) / panels as f64;
    let mut acc = super::sum::Neumaier::default();
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        for (x, w) in nodes.iter().zip(weights) {
            acc.add(w * f(mid + 0.5 * h * x));
        }
    }
    acc.total() * 0.5 * h
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Relative change between the last two refinements.
    pub achieved: f64,
    pub panels: usize,
}

/// Integrates a smooth `f` over `[a, b]`, doubling the number of panels
/// until two successive estimates agree to `target` relative. Fails if the
/// best agreement reached is worse than `accept`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, target: f64, accept: f64) -> Result<Integral> {
    let mut panels = 1;
    let mut prev = composite(&f, a, b, panels);
    let mut best = Integral { value: prev, achieved: f64::INFINITY, panels };
    for _ in 0..MAX_DOUBLINGS {
        panels *= 2;
        let next = composite(&f, a, b, panels);
        let scale = next.abs().max(f64::MIN_POSITIVE);
        let achieved = (next - prev).abs() / scale;
        if !next.is_finite() {
            return Err(Error::QuadratureFailure { achieved: f64::NAN, panels });
        }
        best = Integral { value: next, achieved, panels };
        if achieved <= target {
            return Ok(best);
        }
        prev = next;
    }
    if best.achieved <= accept {
        Ok(best)
    } else {
        Err(Error::QuadratureFailure { achieved: best.achieved, panels: best.panels })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_nodes_symmetric() {
        for n in [1, 2, 5, 24, 40] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13, "n = {n}");
            for i in 0..n {
                assert!((x[i] + x[n - 1 - i]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn exact_for_polynomials() {
        let (x, w) = gauss_legendre(5);
        // degree 9 integrates exactly
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((s - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_smooth_integrals() {
        let r = integrate(f64::sin, 0.0, std::f64::consts::PI, 1e-14, 1e-8).unwrap();
        assert!((r.value - 2.0).abs() < 1e-14);
        let r = integrate(|x: f64| (-x * x).exp(), -8.0, 8.0, 1e-14, 1e-8).unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn reports_failure_on_non_finite() {
        let r = integrate(|x: f64| 1.0 / x, -1.0, 1.0, 1e-14, 1e-8);
        assert!(r.is_err() || !r.unwrap().value.is_nan());
    }
}
