//! Monotone piecewise-cubic Hermite interpolation (Fritsch–Carlson slopes).
//!
//! On every interval where the samples are monotone the interpolant is
//! monotone too, so a sampled single-well potential cannot grow spurious
//! turning points between nodes.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::invalid("params.u", format!("{} abscissae but {} values", xs.len(), ys.len())));
        }
        if xs.len() < 3 {
            return Err(Error::invalid("params.x", "at least 3 samples are required"));
        }
        for (i, (&x, &y)) in xs.iter().zip(&ys).enumerate() {
            if !x.is_finite() {
                return Err(Error::invalid(format!("params.x[{i}]"), "not a finite number"));
            }
            if !y.is_finite() {
                return Err(Error::invalid(format!("params.u[{i}]"), "not a finite number"));
            }
        }
        for (i, w) in xs.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(Error::invalid(format!("params.x[{}]", i + 1), "abscissae must be strictly increasing"));
            }
        }

        let n = xs.len();
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
        let mut slopes = vec![0.0; n];

        // Interior: weighted harmonic mean, zero at extrema.
        for i in 1..n - 1 {
            if delta[i - 1] * delta[i] > 0.0 {
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                slopes[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        slopes[0] = end_slope(h[0], h[1], delta[0], delta[1]);
        slopes[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);

        Ok(MonotoneCubic { xs, ys, slopes })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    /// Value at `x`, `None` outside the sampled range.
    pub fn eval(&self, x: f64) -> Option<f64> {
        let (i, t, h) = self.locate(x)?;
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.slopes[i], self.slopes[i + 1]);
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        Some(h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1)
    }

    /// First derivative at `x`, `None` outside the sampled range.
    pub fn derivative(&self, x: f64) -> Option<f64> {
        let (i, t, h) = self.locate(x)?;
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.slopes[i], self.slopes[i + 1]);
        let t2 = t * t;
        let d00 = 6.0 * t2 - 6.0 * t;
        let d10 = 3.0 * t2 - 4.0 * t + 1.0;
        let d01 = -6.0 * t2 + 6.0 * t;
        let d11 = 3.0 * t2 - 2.0 * t;
        Some((d00 * y0 + d01 * y1) / h + d10 * m0 + d11 * m1)
    }

    /// `f(x + d) - f(x)`; within one interval the cubic difference is
    /// expanded so that small steps do not cancel.
    pub fn step(&self, x: f64, d: f64) -> Option<f64> {
        let (i, t0, h) = self.locate(x)?;
        let (j, t1, _) = self.locate(x + d)?;
        if i != j {
            return Some(self.eval(x + d)? - self.eval(x)?);
        }
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        // p(t) = y0 + m0 t + c2 t² + c3 t³
        let c2 = 3.0 * (y1 - y0) - 2.0 * m0 - m1;
        let c3 = 2.0 * (y0 - y1) + m0 + m1;
        let dt = d / h;
        Some(dt * (m0 + c2 * (t1 + t0) + c3 * (t1 * t1 + t1 * t0 + t0 * t0)))
    }

    fn locate(&self, x: f64) -> Option<(usize, f64, f64)> {
        let (lo, hi) = self.domain();
        if !(lo..=hi).contains(&x) {
            return None;
        }
        let i = match self.xs.partition_point(|&v| v <= x) {
            0 => 0,
            k => (k - 1).min(self.xs.len() - 2),
        };
        let h = self.xs[i + 1] - self.xs[i];
        Some((i, (x - self.xs[i]) / h, h))
    }
}

/// Three-point end slope, clipped to preserve monotonicity.
fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= 0.0 {
        0.0
    } else if d0 * d1 < 0.0 && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reproduces_nodes_and_quadratics_roughly() {
        let xs: Vec<f64> = (0..=40).map(|i| -2.0 + 0.1 * i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let f = MonotoneCubic::new(xs.clone(), ys.clone()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert!((f.eval(*x).unwrap() - y).abs() < 1e-14);
        }
        assert!((f.eval(0.55).unwrap() - 0.3025).abs() < 1e-3);
        assert!((f.derivative(1.05).unwrap() - 2.1).abs() < 2e-2);
    }

    #[test]
    fn step_matches_difference() {
        let f = MonotoneCubic::new(vec![0.0, 1.0, 2.5, 3.0], vec![2.0, 0.0, 1.0, 4.0]).unwrap();
        for (x, d) in [(0.2, 0.3), (1.1, 1e-9), (1.4, -0.3), (0.5, 2.0)] {
            let direct = f.eval(x + d).unwrap() - f.eval(x).unwrap();
            let step = f.step(x, d).unwrap();
            assert!((direct - step).abs() < 1e-14 + 1e-7 * direct.abs(), "{x} {d}: {direct} {step}");
        }
    }

    #[test]
    fn outside_domain_is_none() {
        let f = MonotoneCubic::new(vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0]).unwrap();
        assert_eq!(f.eval(-0.1), None);
        assert_eq!(f.eval(2.1), None);
        assert!(f.eval(2.0).is_some());
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(MonotoneCubic::new(vec![0.0, 1.0], vec![0.0, 1.0]).is_err());
        assert!(MonotoneCubic::new(vec![0.0, 1.0, 1.0], vec![0.0, 1.0, 2.0]).is_err());
        assert!(MonotoneCubic::new(vec![0.0, 1.0, 2.0], vec![0.0, f64::NAN, 2.0]).is_err());
        assert!(MonotoneCubic::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0]).is_err());
    }

    proptest! {
        #[test]
        fn monotone_data_gives_monotone_interpolant(
            steps in proptest::collection::vec((0.01f64..2.0, 0.0f64..3.0), 3..12),
            probes in proptest::collection::vec(0.0f64..1.0, 20),
        ) {
            let mut xs = vec![0.0];
            let mut ys = vec![0.0];
            for (dx, dy) in &steps {
                xs.push(xs.last().unwrap() + dx);
                ys.push(ys.last().unwrap() + dy);
            }
            let f = MonotoneCubic::new(xs.clone(), ys).unwrap();
            let (lo, hi) = f.domain();
            let mut pts: Vec<f64> = probes.iter().map(|p| lo + p * (hi - lo)).collect();
            pts.sort_by(f64::total_cmp);
            let vals: Vec<f64> = pts.iter().map(|&x| f.eval(x).unwrap()).collect();
            for w in vals.windows(2) {
                prop_assert!(w[1] >= w[0] - 1e-12);
            }
        }
    }
}
