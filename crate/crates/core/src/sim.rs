//! Monte Carlo period-timing experiments.
//!
//! A trial times `2s` momentum inversions of level `n`, which take `s·τ_n`,
//! with one Gaussian clock error `ε ~ N(0, δt²)` on the total. The estimate is
//! `τ̂ = τ_n + ε/s`. With [`TimingNoise::PerInversion`] every inversion carries
//! its own error, the total error has st.dev. `δt√(2s)` and `τ̂` has
//! `δt√(2s)/s`.
//!
//! Trial `i` of level `n` draws one `StandardNormal` from `ChaCha20Rng`
//! seeded with `seed_from_u64(seed)` on stream `(n << 32) | i`, so samples do
//! not depend on execution order.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::criterion::{self, LevelSource};
use crate::error::{Error, Result};
use crate::model::{ModelKind, ModelSpec};
use crate::numeric::sum::mean_variance;

/// `mc_resolvable ⇔ d′ ≥ 2`.
pub const D_PRIME_THRESHOLD: f64 = 2.0;
/// Stand-in for an infinite `d′` when the clock is exact.
pub const D_PRIME_CAP: f64 = 1e12;
/// Thresholds reported alongside the default in a sweep summary.
pub const SENSITIVITY_THRESHOLDS: [f64; 5] = [1.0, 1.5, 2.0, 2.5, 3.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimingNoise {
    #[default]
    PerTotal,
    PerInversion,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PeriodProtocol {
    pub s: u32,
    /// Timing st.dev. in display time units; `None` uses `ħ/(2ΔE_n)`.
    pub delta_t: Option<f64>,
    pub trials: usize,
    pub seed: u64,
    pub noise: TimingNoise,
}

impl Default for PeriodProtocol {
    fn default() -> Self {
        PeriodProtocol { s: 1, delta_t: None, trials: 10_000, seed: 0, noise: TimingNoise::PerTotal }
    }
}

impl PeriodProtocol {
    pub fn validate(&self) -> Result<()> {
        if self.s < 1 {
            return Err(Error::InvalidProtocol(format!("s must be at least 1, got {}", self.s)));
        }
        if self.trials < 10 || self.trials > u32::MAX as usize {
            return Err(Error::InvalidProtocol(format!("trials must lie in [10, 2^32), got {}", self.trials)));
        }
        if let Some(dt) = self.delta_t {
            if !(dt >= 0.0 && dt.is_finite()) {
                return Err(Error::InvalidProtocol(format!("delta_t must be finite and non-negative, got {dt}")));
            }
        }
        Ok(())
    }

    /// St.dev. of `τ̂` for a clock of accuracy `delta_t`.
    pub fn estimator_sd(&self, delta_t: f64) -> f64 {
        let s = self.s as f64;
        match self.noise {
            TimingNoise::PerTotal => delta_t / s,
            TimingNoise::PerInversion => delta_t * (2.0 * s).sqrt() / s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodSampleSet {
    pub n: i64,
    pub tau_n: f64,
    pub delta_t: f64,
    pub estimates: Vec<f64>,
    pub protocol: PeriodProtocol,
}

impl PeriodSampleSet {
    pub fn mean_and_sd(&self) -> (f64, f64) {
        let (m, v) = mean_variance(&self.estimates);
        (m, v.sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscriminationResult {
    pub n_low: i64,
    pub n_high: i64,
    pub tau_high: f64,
    pub delta_t: f64,
    pub mean_low: f64,
    pub mean_high: f64,
    pub sd_low: f64,
    pub sd_high: f64,
    pub d_prime: f64,
    pub bayes_error: f64,
    pub mc_resolvable: bool,
    pub y_over_hbar: f64,
    pub criterion_resolvable: bool,
    /// Exact clock: `d′` is capped at [`D_PRIME_CAP`].
    pub noise_free: bool,
}

fn check_period(model: &ModelSpec) -> Result<()> {
    if model.kind() == ModelKind::Harmonic {
        return Err(Error::DegeneratePeriod);
    }
    Ok(())
}

/// `ħ/(2ΔE)` for the pair ending at `n`, or starting at `n` for the ground level.
fn saturating_delta_t(model: &ModelSpec, n: i64) -> Result<f64> {
    let upper = if n > model.n_min() { n } else { n + 1 };
    let gap = criterion::y_function(model, upper)?;
    Ok(model.hbar() / (2.0 * gap.d_e.abs()))
}

fn resolve_delta_t(model: &ModelSpec, n: i64, protocol: &PeriodProtocol) -> Result<f64> {
    match protocol.delta_t {
        Some(dt) => Ok(dt),
        None => saturating_delta_t(model, n),
    }
}

fn draw(n: i64, tau: f64, sd: f64, protocol: &PeriodProtocol) -> Vec<f64> {
    let rng = ChaCha20Rng::seed_from_u64(protocol.seed);
    (0..protocol.trials as u64)
        .map(|i| {
            let mut trial = rng.clone();
            trial.set_stream(((n as u64) << 32) | i);
            let xi: f64 = StandardNormal.sample(&mut trial);
            tau + sd * xi
        })
        .collect()
}

fn sample_with(model: &ModelSpec, n: i64, delta_t: f64, protocol: &PeriodProtocol) -> Result<PeriodSampleSet> {
    let tau = criterion::level_with_period(model, n, LevelSource::default_for(model))?.tau;
    let estimates = draw(n, tau, protocol.estimator_sd(delta_t), protocol);
    Ok(PeriodSampleSet { n, tau_n: tau, delta_t, estimates, protocol: *protocol })
}

pub fn simulate_period_measurement(model: &ModelSpec, n: i64, protocol: &PeriodProtocol) -> Result<PeriodSampleSet> {
    protocol.validate()?;
    check_period(model)?;
    let delta_t = resolve_delta_t(model, n, protocol)?;
    sample_with(model, n, delta_t, protocol)
}

/// Compare levels `n - 1` and `n` timed with the same protocol; the default
/// clock accuracy is `ħ/(2ΔE_n)` for both.
pub fn discriminate(model: &ModelSpec, n: i64, protocol: &PeriodProtocol) -> Result<DiscriminationResult> {
    protocol.validate()?;
    check_period(model)?;
    let gap = criterion::y_function(model, n)?;
    let delta_t = match protocol.delta_t {
        Some(dt) => dt,
        None => model.hbar() / (2.0 * gap.d_e.abs()),
    };
    let low = sample_with(model, n - 1, delta_t, protocol)?;
    let high = sample_with(model, n, delta_t, protocol)?;
    let (mean_low, sd_low) = low.mean_and_sd();
    let (mean_high, sd_high) = high.mean_and_sd();
    let pooled = (0.5 * (sd_low * sd_low + sd_high * sd_high)).sqrt();
    let separation = (mean_high - mean_low).abs();
    let noise_free = pooled == 0.0;
    let d_prime = if noise_free { D_PRIME_CAP } else { (separation / pooled).min(D_PRIME_CAP) };
    Ok(DiscriminationResult {
        n_low: n - 1,
        n_high: n,
        tau_high: high.tau_n,
        delta_t,
        mean_low,
        mean_high,
        sd_low,
        sd_high,
        d_prime,
        bayes_error: bayes_error(mean_low, sd_low, mean_high, sd_high),
        mc_resolvable: d_prime >= D_PRIME_THRESHOLD,
        y_over_hbar: gap.y_over_hbar,
        criterion_resolvable: gap.resolvable,
        noise_free,
    })
}

fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// Error probability of the optimal equal-prior decision between two
/// Gaussians, `½∫min(f₁, f₂)`.
pub fn bayes_error(m1: f64, s1: f64, m2: f64, s2: f64) -> f64 {
    if s1 == 0.0 || s2 == 0.0 {
        return if m1 == m2 && s1 == s2 { 0.5 } else { 0.0 };
    }
    if (s1 - s2).abs() <= 1e-12 * s1.max(s2) {
        let s = 0.5 * (s1 + s2);
        return normal_cdf(-(m1 - m2).abs() / (2.0 * s));
    }
    // f₁ = f₂ where a x² + b x + c = 0
    let (v1, v2) = (s1 * s1, s2 * s2);
    let a = 0.5 / v2 - 0.5 / v1;
    let b = m1 / v1 - m2 / v2;
    let c = 0.5 * m2 * m2 / v2 - 0.5 * m1 * m1 / v1 + (s2 / s1).ln();
    let disc = (b * b - 4.0 * a * c).max(0.0).sqrt();
    let q = -0.5 * (b + b.signum() * disc);
    let (mut r1, mut r2) = (q / a, c / q);
    if r1 > r2 {
        std::mem::swap(&mut r1, &mut r2);
    }
    let mass = |m: f64, s: f64, lo: f64, hi: f64| normal_cdf((hi - m) / s) - normal_cdf((lo - m) / s);
    let density = |x: f64, m: f64, s: f64| (-0.5 * ((x - m) / s).powi(2)).exp() / s;
    let probe = [r1 - s1.max(s2), 0.5 * (r1 + r2), r2 + s1.max(s2)];
    let bounds = [(f64::NEG_INFINITY, r1), (r1, r2), (r2, f64::INFINITY)];
    let total: f64 = bounds
        .iter()
        .zip(probe)
        .map(
            |(&(lo, hi), x)| {
                if density(x, m1, s1) < density(x, m2, s2) {
                    mass(m1, s1, lo, hi)
                } else {
                    mass(m2, s2, lo, hi)
                }
            },
        )
        .sum();
    (0.5 * total).clamp(0.0, 0.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensitivityRow {
    pub d_prime_threshold: f64,
    pub mc_crossover: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub n_lo: i64,
    pub n_hi: i64,
    pub seed: u64,
    pub protocol: PeriodProtocol,
    pub d_prime_threshold: f64,
    pub mc_crossover: Option<i64>,
    pub criterion_crossover: Option<i64>,
    /// Both crossovers exist and differ by at most one level, or neither exists.
    pub crossover_within_one: bool,
    pub mc_resolvable_pairs: usize,
    pub agreements: usize,
    pub disagreements: Vec<i64>,
    pub sensitivity: Vec<SensitivityRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub results: Vec<DiscriminationResult>,
    pub summary: SweepSummary,
}

/// First `n` from which every pair up to the end of the range is
/// unresolvable; `None` when the last pair is resolvable.
pub fn crossover(flags: impl IntoIterator<Item = (i64, bool)>) -> Option<i64> {
    let mut found = None;
    for (n, resolvable) in flags {
        if resolvable {
            found = None;
        } else if found.is_none() {
            found = Some(n);
        }
    }
    found
}

/// Discriminate every adjacent pair `(n-1, n)` for `n` in `[n_lo, n_hi]`.
pub fn consistency_sweep(model: &ModelSpec, n_lo: i64, n_hi: i64, template: &PeriodProtocol) -> Result<Sweep> {
    template.validate()?;
    check_period(model)?;
    let (min, max) = criterion::gap_range(model);
    let max = max.unwrap_or(i64::MAX);
    if n_lo < min || n_hi > max || n_lo > n_hi || n_hi >= 1 << 31 {
        let bad = if n_lo < min || n_lo > n_hi { n_lo } else { n_hi };
        return Err(Error::OutOfRange { n: bad, min, max });
    }
    let results = (n_lo..=n_hi).map(|n| discriminate(model, n, template)).collect::<Result<Vec<_>>>()?;
    let mc_crossover = crossover(results.iter().map(|r| (r.n_high, r.mc_resolvable)));
    let criterion_crossover = crossover(results.iter().map(|r| (r.n_high, r.criterion_resolvable)));
    let crossover_within_one = match (mc_crossover, criterion_crossover) {
        (Some(a), Some(b)) => (a - b).abs() <= 1,
        (None, None) => true,
        _ => false,
    };
    let disagreements: Vec<i64> =
        results.iter().filter(|r| r.mc_resolvable != r.criterion_resolvable).map(|r| r.n_high).collect();
    let sensitivity = SENSITIVITY_THRESHOLDS
        .iter()
        .map(|&t| SensitivityRow {
            d_prime_threshold: t,
            mc_crossover: crossover(results.iter().map(|r| (r.n_high, r.d_prime >= t))),
        })
        .collect();
    let summary = SweepSummary {
        n_lo,
        n_hi,
        seed: template.seed,
        protocol: *template,
        d_prime_threshold: D_PRIME_THRESHOLD,
        mc_crossover,
        criterion_crossover,
        crossover_within_one,
        mc_resolvable_pairs: results.iter().filter(|r| r.mc_resolvable).count(),
        agreements: results.len() - disagreements.len(),
        disagreements,
        sensitivity,
    };
    Ok(Sweep { results, summary })
}
