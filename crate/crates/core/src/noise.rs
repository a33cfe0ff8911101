//! Gaussian measurement noise and the standard quantum limit.
//!
//! A position measurement on an ensemble returns `x_i = r + ξ_i` with
//! `ξ_i ~ N(0, δx²)`; averaging the displaced states over the noise gives the
//! factor `exp(-p²δx²/(2ħ²))` in momentum space and hence a Gaussian position
//! profile of width `δx`. The momentum quadrature is handled the same way
//! with centre `d` and width `δp`. A single symbol `δx` (resp. `δp`) is used
//! for what appears as `s²`, `Δx²` and `δx²` (resp. `a²`, `δp²`) in the usual
//! derivation.
//!
//! Random streams: every ensemble is drawn from `ChaCha20Rng` seeded with
//! `seed_from_u64(seed)`; position outcomes use stream 0 and momentum
//! outcomes stream 1, consumed sequentially through `StandardNormal`.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelParams, ModelSpec};
use crate::numeric::quad;
use crate::numeric::sum::{mean_variance, Neumaier};
use crate::spectrum;

/// Slack below ħ/2 still counted as SQL-saturating.
pub const SQL_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quadrature {
    Position,
    Momentum,
}

impl Quadrature {
    pub fn name(self) -> &'static str {
        match self {
            Quadrature::Position => "position",
            Quadrature::Momentum => "momentum",
        }
    }

    fn stream(self) -> u64 {
        match self {
            Quadrature::Position => 0,
            Quadrature::Momentum => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseBudget {
    pub delta_x: f64,
    pub delta_p: f64,
    pub product_over_hbar: f64,
}

impl NoiseBudget {
    pub fn new(delta_x: f64, delta_p: f64, hbar: f64) -> Result<Self> {
        for s in [delta_x, delta_p] {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(Error::InvalidSigma(s));
            }
        }
        Ok(NoiseBudget { delta_x, delta_p, product_over_hbar: delta_x * delta_p / hbar })
    }

    /// At or above the standard quantum limit `δxδp = ħ/2`.
    pub fn is_preparable(&self) -> bool {
        self.product_over_hbar >= 0.5 - SQL_SLACK
    }
}

/// Outcomes of repeated measurements of one quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementEnsemble {
    pub quantity: Quadrature,
    pub samples: Vec<f64>,
    pub seed: u64,
    pub true_center: f64,
    pub sigma: f64,
}

impl MeasurementEnsemble {
    pub fn new(quantity: Quadrature, samples: Vec<f64>, seed: u64, true_center: f64, sigma: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidCount(samples.len()));
        }
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidSigma(sigma));
        }
        Ok(MeasurementEnsemble { quantity, samples, seed, true_center, sigma })
    }

    pub fn mean_and_std(&self) -> (f64, f64) {
        let (m, v) = mean_variance(&self.samples);
        (m, v.sqrt())
    }
}

/// `count` outcomes `center + σ ξ_i`, deterministic in `seed`.
pub fn sample_ensemble(
    quantity: Quadrature,
    center: f64,
    sigma: f64,
    count: usize,
    seed: u64,
) -> Result<MeasurementEnsemble> {
    if count < 2 {
        return Err(Error::InvalidCount(count));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidSigma(sigma));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(quantity.stream());
    let samples = (0..count)
        .map(|_| {
            let xi: f64 = StandardNormal.sample(&mut rng);
            center + sigma * xi
        })
        .collect();
    MeasurementEnsemble::new(quantity, samples, seed, center, sigma)
}

/// Ensemble mean of the displacement phase, `exp(-p²δx²/(2ħ²))`.
pub fn characteristic_factor(delta_x: f64, p: f64, hbar: f64) -> f64 {
    let z = p * delta_x / hbar;
    (-0.5 * z * z).exp()
}

/// Monte Carlo estimate of `⟨exp(-i p ξ/ħ)⟩` over the ensemble noise
/// `ξ_i = x_i - r`, as `(re, im, standard_error)`.
pub fn empirical_characteristic(ensemble: &MeasurementEnsemble, p: f64, hbar: f64) -> (f64, f64, f64) {
    let n = ensemble.samples.len() as f64;
    let mut re = Neumaier::default();
    let mut im = Neumaier::default();
    for x in &ensemble.samples {
        let phase = -p * (x - ensemble.true_center) / hbar;
        let (s, c) = phase.sin_cos();
        re.add(c);
        im.add(s);
    }
    (re.total() / n, im.total() / n, 1.0 / n.sqrt())
}

/// Post-measurement Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianState {
    pub r: f64,
    pub d: f64,
    pub delta_x: f64,
    pub delta_p: f64,
    pub product_over_hbar: f64,
    /// Width product below `ħ/2`: such an ensemble cannot be prepared.
    pub sub_sql: bool,
}

impl GaussianState {
    pub fn position_density(&self, x: f64) -> f64 {
        gaussian(x, self.r, self.delta_x)
    }

    pub fn momentum_density(&self, p: f64) -> f64 {
        gaussian(p, self.d, self.delta_p)
    }

    /// `∫ φ(x) dx` over `r ± 8δx`.
    pub fn position_normalization(&self) -> Result<f64> {
        if self.delta_x <= 0.0 {
            return Ok(1.0);
        }
        let half = 8.0 * self.delta_x;
        Ok(quad::integrate(|x| self.position_density(x), self.r - half, self.r + half, 1e-14, 1e-10)?.value)
    }
}

fn gaussian(x: f64, center: f64, width: f64) -> f64 {
    let z = (x - center) / width;
    (-0.5 * z * z).exp() / (2.0 * PI * width * width).sqrt()
}

/// Centres and widths from the sample statistics of both quadratures.
pub fn reconstruct_state(
    position: &MeasurementEnsemble,
    momentum: &MeasurementEnsemble,
    hbar: f64,
) -> Result<GaussianState> {
    let (r, delta_x) = position.mean_and_std();
    let (d, delta_p) = momentum.mean_and_std();
    for (ens, width) in [(position, delta_x), (momentum, delta_p)] {
        if width == 0.0 && ens.sigma > 0.0 {
            return Err(Error::DegenerateEnsemble { quantity: ens.quantity.name(), sigma: ens.sigma });
        }
    }
    let product_over_hbar = delta_x * delta_p / hbar;
    Ok(GaussianState { r, d, delta_x, delta_p, product_over_hbar, sub_sql: product_over_hbar < 0.5 - SQL_SLACK })
}

/// `|p|√(ħω/2m) + k|q|√(ħ/2mω)`.
pub fn energy_error_bracket(q: f64, p: f64, m: f64, k: f64, hbar: f64) -> f64 {
    let omega = (k / m).sqrt();
    p.abs() * (hbar * omega / (2.0 * m)).sqrt() + k * q.abs() * (hbar / (2.0 * m * omega)).sqrt()
}

/// First-order energy error of a simultaneous `(q, p)` reading of an
/// oscillator with `δp = √(mħω/2)·a` and `δq = √(ħ/(2mω))·a`, so that
/// `δpδq = a²ħ/2`.
pub fn harmonic_energy_error(q: f64, p: f64, m: f64, k: f64, a: f64, hbar: f64) -> f64 {
    energy_error_bracket(q, p, m, k, hbar) * a
}

/// Smallest `δpδq/ħ` at which the worst-phase energy error on the orbit of
/// level `n` reaches the half spacing `ħω/2`.
///
/// The bracket is maximised over the orbit phase by a grid scan refined with
/// golden-section search; `δE² = (2/ħ)·bracket²·δpδq` is then inverted.
pub fn required_noise_product_for_resolution(model: &ModelSpec, n: i64) -> Result<f64> {
    let ModelParams::Harmonic { mass, stiffness } = *model.params() else {
        return Err(Error::Unsupported { kind: model.kind().name(), what: "noise product requires a harmonic model" });
    };
    let hbar = model.units().hbar_coherent();
    let omega = (stiffness / mass).sqrt();
    let energy = spectrum::energy_level(model, n)?.energy;
    let (p_amp, q_amp) = ((2.0 * mass * energy).sqrt(), (2.0 * energy / stiffness).sqrt());
    let bracket = |phi: f64| energy_error_bracket(q_amp * phi.sin(), p_amp * phi.cos(), mass, stiffness, hbar);
    let worst = maximize_periodic(bracket, 64);
    let half_spacing = 0.5 * hbar * omega;
    Ok(half_spacing * half_spacing / (2.0 * worst * worst))
}

/// Maximum of a 2π-periodic function: grid of `grid` points, then golden
/// section on the bracket around the best grid point.
fn maximize_periodic<F: Fn(f64) -> f64>(f: F, grid: usize) -> f64 {
    let step = 2.0 * PI / grid as f64;
    let best = (0..grid).map(|i| i as f64 * step).max_by(|a, b| f(*a).total_cmp(&f(*b))).unwrap_or(0.0);
    let (mut a, mut b) = (best - step, best + step);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() < 1e-12 {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    f(0.5 * (a + b)).max(f(best))
}
