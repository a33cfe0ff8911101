//! The `y(n) = |ΔE_n Δτ_n|` resolvability criterion.
//!
//! `ΔE_n = (E_n - E_{n-1})/2` is the largest energy spread of a two-level
//! superposition of neighbouring levels and `Δτ_n = (τ_n - τ_{n-1})/2` the
//! corresponding half difference of classical periods. A neighbouring pair
//! is classically resolvable iff `y(n) ≥ ħ/2`; all values are reported as
//! the dimensionless ratio `y/ħ`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelKind, ModelSpec};
use crate::semiclassical::{self, Maslov};
use crate::spectrum::{self, EnergyLevel};

/// Default number of levels the threshold scan may visit.
pub const DEFAULT_SCAN_LIMIT: u64 = 1_000_000;

/// Published hydrogenoid threshold that direct evaluation does not reproduce.
pub const HYDROGENOID_QUOTED_THRESHOLD: i64 = 9;

/// `a|E_n⟩ + b|E_{n-1}⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionState {
    amplitude_a: Complex64,
    amplitude_b: Complex64,
    level_n: EnergyLevel,
    level_n_minus_1: EnergyLevel,
}

impl SuperpositionState {
    pub fn new(a: Complex64, b: Complex64, level_n: EnergyLevel, level_n_minus_1: EnergyLevel) -> Result<Self> {
        let norm = a.norm_sqr() + b.norm_sqr();
        if !((norm - 1.0).abs() <= 1e-12) {
            return Err(Error::InvalidSuperposition(format!("|a|^2 + |b|^2 = {norm}, expected 1")));
        }
        if level_n.n - level_n_minus_1.n != 1 {
            return Err(Error::InvalidSuperposition(format!(
                "levels {} and {} are not adjacent",
                level_n.n, level_n_minus_1.n
            )));
        }
        Ok(SuperpositionState { amplitude_a: a, amplitude_b: b, level_n, level_n_minus_1 })
    }

    pub fn amplitudes(&self) -> (Complex64, Complex64) {
        (self.amplitude_a, self.amplitude_b)
    }
}

/// `ΔE = |a||b|(E_n - E_{n-1})`, the same at every time.
pub fn energy_uncertainty(state: &SuperpositionState) -> f64 {
    state.amplitude_a.norm() * state.amplitude_b.norm() * (state.level_n.energy - state.level_n_minus_1.energy)
}

/// `½|E_n - E_{n-1}|`, the value at `|a| = |b| = 1/√2`.
pub fn max_energy_uncertainty(model: &ModelSpec, n: i64) -> Result<f64> {
    let (upper, lower) = level_pair(model, n, LevelSource::default_for(model))?;
    Ok(0.5 * (upper.energy - lower.energy).abs())
}

/// Where levels and periods come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "source", content = "maslov")]
pub enum LevelSource {
    ClosedForm,
    Semiclassical(u8),
}

impl LevelSource {
    pub fn default_for(model: &ModelSpec) -> Self {
        match model.kind() {
            ModelKind::NumericPotential => LevelSource::Semiclassical(Maslov::default_for(model).0),
            _ => LevelSource::ClosedForm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapAnnotation {
    /// The classical period does not depend on energy, so `Δτ = 0`.
    PeriodDegenerate,
}

impl GapAnnotation {
    pub fn message(self) -> &'static str {
        match self {
            GapAnnotation::PeriodDegenerate => "period-degenerate: criterion inconclusive by period measurement",
        }
    }
}

/// One neighbouring pair `(n-1, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelGap {
    pub n: i64,
    pub energy_n: f64,
    pub tau_n: f64,
    /// `(E_n - E_{n-1}) / 2`.
    pub d_e: f64,
    /// `(τ_n - τ_{n-1}) / 2`, signed.
    pub d_tau: f64,
    pub y_over_hbar: f64,
    /// `y ≥ ħ/2`; the boundary counts as resolvable.
    pub resolvable: bool,
    pub annotation: Option<GapAnnotation>,
}

pub(crate) struct LevelWithPeriod {
    pub(crate) energy: f64,
    pub(crate) tau: f64,
}

pub(crate) fn level_with_period(model: &ModelSpec, n: i64, source: LevelSource) -> Result<LevelWithPeriod> {
    match source {
        LevelSource::ClosedForm => Ok(LevelWithPeriod {
            energy: spectrum::energy_level(model, n)?.energy,
            tau: spectrum::classical_period(model, n)?.tau,
        }),
        LevelSource::Semiclassical(nu) => {
            let level = semiclassical::quantize(model, n, Maslov(nu))?;
            let tau = semiclassical::period_of_energy(model, level.energy)?.tau;
            Ok(LevelWithPeriod { energy: level.energy, tau })
        }
    }
}

fn level_pair(model: &ModelSpec, n: i64, source: LevelSource) -> Result<(EnergyLevel, EnergyLevel)> {
    let min = model.n_min();
    if n < min + 1 {
        return Err(Error::OutOfRange { n, min: min + 1, max: model.n_max().unwrap_or(i64::MAX) });
    }
    let get = |k: i64| -> Result<EnergyLevel> {
        match source {
            LevelSource::ClosedForm => spectrum::energy_level(model, k),
            LevelSource::Semiclassical(nu) => semiclassical::quantize(model, k, Maslov(nu)),
        }
    };
    Ok((get(n)?, get(n - 1)?))
}

/// `y(n)/ħ` with the model's default level source.
pub fn y_function(model: &ModelSpec, n: i64) -> Result<LevelGap> {
    y_function_with(model, n, LevelSource::default_for(model))
}

pub fn y_function_with(model: &ModelSpec, n: i64, source: LevelSource) -> Result<LevelGap> {
    let min = model.n_min();
    if n < min + 1 {
        return Err(Error::OutOfRange { n, min: min + 1, max: model.n_max().unwrap_or(i64::MAX) });
    }
    let upper = level_with_period(model, n, source)?;
    let lower = level_with_period(model, n - 1, source)?;
    let d_e = 0.5 * (upper.energy - lower.energy);
    let d_tau = 0.5 * (upper.tau - lower.tau);
    let annotation = (model.kind() == ModelKind::Harmonic).then_some(GapAnnotation::PeriodDegenerate);
    let y_over_hbar = if annotation.is_some() { 0.0 } else { (d_e * d_tau).abs() / model.hbar() };
    Ok(LevelGap {
        n,
        energy_n: upper.energy,
        tau_n: upper.tau,
        d_e,
        d_tau,
        y_over_hbar,
        resolvable: y_over_hbar >= 0.5,
        annotation,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    AllResolvable,
    AllUnresolvable,
    Crossover,
}

/// Outcome of comparing `y(n)` with `ħ/2` along increasing `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdScan {
    /// Smallest `n` with `y(n) < ħ/2`.
    pub n_star: Option<i64>,
    pub regime: Regime,
    /// Every `n` at which the resolvable flag differs from that of `n - 1`.
    pub crossings: Vec<i64>,
    /// `y` is non-increasing and stays below `ħ/2` from `n_star` on.
    pub monotone_tail: bool,
}

impl ThresholdScan {
    fn from_gaps(gaps: &[LevelGap]) -> Self {
        let n_star = gaps.iter().find(|g| !g.resolvable).map(|g| g.n);
        let crossings = gaps.windows(2).filter(|w| w[0].resolvable != w[1].resolvable).map(|w| w[1].n).collect();
        let regime = match (gaps.iter().any(|g| g.resolvable), gaps.iter().any(|g| !g.resolvable)) {
            (true, true) => Regime::Crossover,
            (false, _) => Regime::AllUnresolvable,
            (true, false) => Regime::AllResolvable,
        };
        let monotone_tail = match n_star {
            Some(star) => {
                let tail: Vec<&LevelGap> = gaps.iter().filter(|g| g.n >= star).collect();
                tail.iter().all(|g| !g.resolvable) && tail.windows(2).all(|w| w[1].y_over_hbar <= w[0].y_over_hbar)
            }
            None => true,
        };
        ThresholdScan { n_star, regime, crossings, monotone_tail }
    }
}

/// Full criterion output over a range of `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvabilityReport {
    pub model: ModelKind,
    pub units: String,
    pub source: LevelSource,
    pub gaps: Vec<LevelGap>,
    pub threshold: ThresholdScan,
    /// `(n, ΔE_n / E_n)`.
    pub ratio_series: Vec<(i64, f64)>,
    pub notes: Vec<String>,
}

impl ResolvabilityReport {
    fn from_gaps(model: &ModelSpec, source: LevelSource, mut gaps: Vec<LevelGap>) -> Self {
        gaps.sort_by_key(|g| g.n);
        gaps.dedup_by_key(|g| g.n);
        let threshold = ThresholdScan::from_gaps(&gaps);
        let ratio_series = gaps.iter().map(|g| (g.n, g.d_e / g.energy_n)).collect();
        let mut notes = Vec::new();
        if gaps.iter().any(|g| g.annotation == Some(GapAnnotation::PeriodDegenerate)) {
            notes.push(GapAnnotation::PeriodDegenerate.message().to_string());
        }
        if model.kind() == ModelKind::Hydrogenoid {
            notes.push(hydrogenoid_note());
        }
        if !threshold.monotone_tail {
            notes.push(format!("y(n) re-crosses hbar/2 at n = {:?}", threshold.crossings));
        }
        ResolvabilityReport {
            model: model.kind(),
            units: model.units().name.clone(),
            source,
            gaps,
            threshold,
            ratio_series,
            notes,
        }
    }

    /// Combines reports built for disjoint ranges of the same model. The
    /// result does not depend on the order of `parts`.
    pub fn merge(model: &ModelSpec, parts: Vec<ResolvabilityReport>) -> ResolvabilityReport {
        let source = parts.first().map_or(LevelSource::default_for(model), |p| p.source);
        let gaps = parts.into_iter().flat_map(|p| p.gaps).collect();
        ResolvabilityReport::from_gaps(model, source, gaps)
    }
}

fn hydrogenoid_note() -> String {
    format!(
        "quoted threshold n >= {HYDROGENOID_QUOTED_THRESHOLD} is not reproduced: the closed form gives \
         y(9)/hbar = 3689*pi/20736 ~ 0.558899 > 1/2 and y(10)/hbar = 5149*pi/32400 ~ 0.499261 < 1/2, \
         so the first unresolvable pair is n = 10"
    )
}

/// Valid `n` for gaps: both `n` and `n - 1` must be levels.
pub fn gap_range(model: &ModelSpec) -> (i64, Option<i64>) {
    (model.n_min() + 1, model.n_max())
}

pub fn classify(model: &ModelSpec, n_lo: i64, n_hi: i64) -> Result<ResolvabilityReport> {
    classify_with(model, n_lo, n_hi, LevelSource::default_for(model))
}

pub fn classify_with(model: &ModelSpec, n_lo: i64, n_hi: i64, source: LevelSource) -> Result<ResolvabilityReport> {
    let (min, max) = gap_range(model);
    let max_v = max.unwrap_or(i64::MAX);
    if n_lo < min || n_hi > max_v || n_lo > n_hi {
        let bad = if n_lo < min || n_lo > n_hi { n_lo } else { n_hi };
        return Err(Error::OutOfRange { n: bad, min, max: max_v });
    }
    let gaps = (n_lo..=n_hi).map(|n| y_function_with(model, n, source)).collect::<Result<Vec<_>>>()?;
    Ok(ResolvabilityReport::from_gaps(model, source, gaps))
}

/// Smallest `n` with `y(n) < ħ/2`, scanning upward from `n_min + 1`.
pub fn threshold(model: &ModelSpec) -> Result<Option<i64>> {
    Ok(threshold_scan(model, DEFAULT_SCAN_LIMIT)?.n_star)
}

/// Scans until the first `n` with `y < ħ/2` and then a short stretch past it
/// to check that the tail stays below.
pub fn threshold_scan(model: &ModelSpec, limit: u64) -> Result<ThresholdScan> {
    const TAIL: i64 = 16;
    let source = LevelSource::default_for(model);
    let (start, max) = gap_range(model);
    let mut gaps = Vec::new();
    let mut stop_at: Option<i64> = None;
    let mut n = start;
    loop {
        if max.is_some_and(|m| n > m) || stop_at.is_some_and(|s| n > s) {
            break;
        }
        if (n - start) as u64 >= limit {
            if stop_at.is_some() {
                break;
            }
            return Err(Error::ScanLimitExceeded { limit });
        }
        let gap = match y_function_with(model, n, source) {
            Ok(g) => g,
            // numeric wells end when the action runs out
            Err(Error::ActionOutOfRange { .. }) if model.kind() == ModelKind::NumericPotential => break,
            Err(e) => return Err(e),
        };
        if !gap.resolvable && stop_at.is_none() {
            stop_at = Some(n + TAIL);
        }
        gaps.push(gap);
        n += 1;
    }
    Ok(ThresholdScan::from_gaps(&gaps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;
    use crate::units::UnitSystem;
    use std::f64::consts::PI;

    fn boxm() -> ModelSpec {
        ModelSpec::new(ModelParams::Box { mass: 1.0, width: 1.0 }, UnitSystem::natural_box()).unwrap()
    }
    fn harmonic() -> ModelSpec {
        ModelSpec::new(ModelParams::Harmonic { mass: 1.0, stiffness: 1.0 }, UnitSystem::oscillator()).unwrap()
    }
    fn hydrogen() -> ModelSpec {
        ModelSpec::new(
            ModelParams::Hydrogenoid { reduced_mass: 1.0, charge_number: 1, elementary_charge: 1.0 },
            UnitSystem::atomic(),
        )
        .unwrap()
    }

    fn level(n: i64, energy: f64) -> EnergyLevel {
        EnergyLevel { n, energy, bound: true }
    }

    #[test]
    fn energy_uncertainty_examples() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let s = SuperpositionState::new(one, zero, level(2, 3.0), level(1, 2.0)).unwrap();
        assert_eq!(energy_uncertainty(&s), 0.0);

        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let e2 = spectrum::energy_level(&boxm(), 2).unwrap();
        let e1 = spectrum::energy_level(&boxm(), 1).unwrap();
        let s = SuperpositionState::new(h, h, e2, e1).unwrap();
        assert!((energy_uncertainty(&s) - 3.0 * PI * PI / 4.0).abs() < 1e-13);

        let s = SuperpositionState::new(
            Complex64::new(0.9f64.sqrt(), 0.0),
            Complex64::new(0.0, 0.1f64.sqrt()),
            level(5, 1.0),
            level(4, 0.0),
        )
        .unwrap();
        assert!((energy_uncertainty(&s) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn superposition_validation() {
        let one = Complex64::new(1.0, 0.0);
        assert!(SuperpositionState::new(one, one, level(2, 1.0), level(1, 0.0)).is_err());
        assert!(SuperpositionState::new(one, Complex64::new(0.0, 0.0), level(3, 1.0), level(1, 0.0)).is_err());
    }

    #[test]
    fn max_energy_uncertainty_examples() {
        for n in 1..20 {
            assert!((max_energy_uncertainty(&harmonic(), n).unwrap() - 0.5).abs() < 1e-14);
        }
        assert!((max_energy_uncertainty(&boxm(), 3).unwrap() - 5.0 * PI * PI / 4.0).abs() < 1e-13);
        assert!((max_energy_uncertainty(&hydrogen(), 2).unwrap() - 0.1875).abs() < 1e-15);
        assert!(matches!(max_energy_uncertainty(&boxm(), 1), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn y_examples() {
        assert!((y_function(&boxm(), 4).unwrap().y_over_hbar - 7.0 * PI / 48.0).abs() < 1e-13);
        assert!((y_function(&boxm(), 3).unwrap().y_over_hbar - 5.0 * PI / 24.0).abs() < 1e-13);
        assert!((y_function(&hydrogen(), 10).unwrap().y_over_hbar - PI * 5149.0 / 32400.0).abs() < 1e-12);
        let g = y_function(&harmonic(), 5).unwrap();
        assert_eq!(g.y_over_hbar, 0.0);
        assert_eq!(g.annotation, Some(GapAnnotation::PeriodDegenerate));
        assert!(!g.resolvable);
        // box Δτ is negative and kept signed
        assert!(y_function(&boxm(), 4).unwrap().d_tau < 0.0);
    }

    #[test]
    fn thresholds() {
        assert_eq!(threshold(&boxm()).unwrap(), Some(4));
        assert_eq!(threshold(&hydrogen()).unwrap(), Some(10));
        assert_eq!(threshold(&harmonic()).unwrap(), Some(1));
        let scan = threshold_scan(&boxm(), DEFAULT_SCAN_LIMIT).unwrap();
        assert!(scan.monotone_tail);
        assert_eq!(scan.crossings, vec![4]);
    }

    #[test]
    fn scan_limit() {
        assert_eq!(threshold_scan(&boxm(), 2), Err(Error::ScanLimitExceeded { limit: 2 }));
        assert!(threshold_scan(&boxm(), 3).is_ok());
    }

    #[test]
    fn classify_box() {
        let r = classify(&boxm(), 2, 20).unwrap();
        assert_eq!(r.threshold.n_star, Some(4));
        assert_eq!(r.threshold.regime, Regime::Crossover);
        assert!(r.gaps.iter().filter(|g| g.resolvable).map(|g| g.n).eq([2, 3]));
        assert!(r.ratio_series.windows(2).all(|w| w[1].1 < w[0].1));
        assert!(matches!(classify(&boxm(), 1, 5), Err(Error::OutOfRange { n: 1, .. })));
    }

    #[test]
    fn classify_harmonic_is_degenerate() {
        let r = classify(&harmonic(), 1, 30).unwrap();
        assert_eq!(r.threshold.regime, Regime::AllUnresolvable);
        assert!(r.gaps.iter().all(|g| g.y_over_hbar == 0.0));
        assert!(r.notes.iter().any(|n| n.contains("period-degenerate")));
        assert!(r.ratio_series.windows(2).all(|w| w[1].1 < w[0].1));
    }

    #[test]
    fn hydrogen_report_carries_note() {
        let r = classify(&hydrogen(), 2, 20).unwrap();
        assert_eq!(r.threshold.n_star, Some(10));
        assert!(r.notes.iter().any(|n| n.contains("n >= 9")));
    }

    #[test]
    fn merge_is_order_independent() {
        let m = boxm();
        let parts = std::thread::scope(|s| {
            let a = s.spawn(|| classify(&m, 2, 7).unwrap());
            let b = s.spawn(|| classify(&m, 8, 20).unwrap());
            (a.join().unwrap(), b.join().unwrap())
        });
        let whole = classify(&m, 2, 20).unwrap();
        assert_eq!(ResolvabilityReport::merge(&m, vec![parts.0.clone(), parts.1.clone()]), whole);
        assert_eq!(ResolvabilityReport::merge(&m, vec![parts.1, parts.0]), whole);
    }
}
