//! Bohr–Sommerfeld quantization and classical periods for arbitrary wells.
//!
//! Action and period integrals use the substitution
//! `x = x₋ + (x₊ - x₋) sin²θ`, which turns the inverse-square-root endpoint
//! behaviour at simple turning points into a smooth integrand in `θ`; the
//! result is then integrated by composite Gauss–Legendre with panel doubling.
//! The box is handled analytically since its walls are not simple turning
//! points.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelKind, ModelParams, ModelSpec};
use crate::numeric::{quad, roots};
use crate::spectrum::EnergyLevel;

const QUAD_TARGET: f64 = 1e-13;
const QUAD_ACCEPT: f64 = 1e-8;
const MAX_SCAN_STEPS: u32 = 1 << 10;
/// Agreement required between the period integral and dI/dE.
pub const PERIOD_CHECK_TOLERANCE: f64 = 1e-6;

/// How the classical motion ends at a turning point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    Smooth,
    HardWall,
    /// Collision with the attractive Coulomb centre at `x = 0`.
    Singular,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TurningPoints {
    pub energy: f64,
    pub x_minus: f64,
    pub x_plus: f64,
    pub left: Boundary,
    pub right: Boundary,
}

/// Quarter-phase count `ν` in `I = 2πħ(n + ν/4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Maslov(pub u8);

impl Maslov {
    /// Two smooth turning points: `n + ½`.
    pub const SMOOTH: Maslov = Maslov(2);
    /// Two hard walls, or the bare rule `I = 2πħn`.
    pub const BARE: Maslov = Maslov(0);

    /// ν = 2 for two smooth turning points, 0 for two hard walls, 1 for one
    /// of each. The radial Coulomb problem uses the bare rule with `n ≥ 1`,
    /// which reproduces its exact levels.
    pub fn default_for(model: &ModelSpec) -> Maslov {
        match model.kind() {
            ModelKind::Box | ModelKind::Hydrogenoid => Maslov(0),
            ModelKind::Harmonic | ModelKind::Morse | ModelKind::NumericPotential => Maslov(2),
        }
    }

    pub fn quarter_phase(self) -> f64 {
        self.0 as f64 / 4.0
    }
}

/// Sampled action curve `I(E)` with `dI/dE` (coherent time units).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActionCurve {
    pub samples: Vec<(f64, f64)>,
    pub derivative: Vec<f64>,
}

impl ActionCurve {
    pub fn is_strictly_increasing(&self) -> bool {
        self.samples.windows(2).all(|w| w[1].0 > w[0].0 && w[1].1 > w[0].1) && self.derivative.iter().all(|d| *d > 0.0)
    }
}

/// Period at an energy plus the residual of its comparison against a
/// centred finite difference of the action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodEstimate {
    pub energy: f64,
    /// Display time units.
    pub tau: f64,
    /// `|τ - dI/dE| / τ`.
    pub check_residual: f64,
}

/// Open interval of energies with bound motion.
pub fn energy_window(model: &ModelSpec) -> (f64, f64) {
    let lower = match model.kind() {
        ModelKind::Box => 0.0,
        _ => model.well_minimum().1,
    };
    (lower, model.ceiling_energy())
}

fn check_energy(model: &ModelSpec, energy: f64) -> Result<()> {
    let (lower, upper) = energy_window(model);
    if energy.is_finite() && energy > lower && energy < upper {
        Ok(())
    } else {
        Err(Error::NoBoundMotion { energy, lower, upper })
    }
}

fn length_scale(model: &ModelSpec) -> f64 {
    let hbar = model.units().hbar_coherent();
    match *model.params() {
        ModelParams::Box { width, .. } => width,
        ModelParams::Harmonic { stiffness, .. } => (2.0 * model.energy_scale() / stiffness).sqrt(),
        ModelParams::Hydrogenoid { reduced_mass, charge_number, elementary_charge } => {
            hbar * hbar / (reduced_mass * charge_number as f64 * elementary_charge * elementary_charge)
        }
        ModelParams::Morse { range, .. } => 1.0 / range,
        ModelParams::NumericPotential { ref table, .. } => {
            let (lo, hi) = table.domain();
            hi - lo
        }
    }
}

/// Scans outward from the well minimum in geometrically growing steps until
/// the potential reaches `energy`, then bisects to adjacent floats.
fn scan_side(model: &ModelSpec, energy: f64, direction: f64) -> Result<f64> {
    let (x0, _) = model.well_minimum();
    let h0 = 1e-3 * length_scale(model);
    let excess = |x: f64| -> Option<f64> {
        if x == x0 {
            return Some(energy - model.well_minimum().1);
        }
        excess_energy(model, energy, x)
    };
    let mut inside = x0;
    for k in 0..MAX_SCAN_STEPS {
        let probe = x0 + direction * h0 * 2f64.powi(k as i32);
        match excess(probe) {
            Some(e) if e > 0.0 => inside = probe,
            Some(_) => {
                let root = roots::bisect(|x| excess(x).unwrap_or(-1.0), inside, probe);
                return Ok(root);
            }
            None => {
                // Left the sampled table: the edge itself must be forbidden.
                if let ModelParams::NumericPotential { ref table, .. } = *model.params() {
                    let (lo, hi) = table.domain();
                    let edge = if direction < 0.0 { lo } else { hi };
                    if excess(edge).is_some_and(|e| e <= 0.0) {
                        return Ok(roots::bisect(|x| excess(x).unwrap_or(-1.0), inside, edge));
                    }
                }
                return Err(Error::RootNotBracketed { energy, steps: k, last_probe: probe });
            }
        }
        if !probe.is_finite() {
            return Err(Error::RootNotBracketed { energy, steps: k, last_probe: probe });
        }
    }
    Err(Error::RootNotBracketed {
        energy,
        steps: MAX_SCAN_STEPS,
        last_probe: x0 + direction * h0 * 2f64.powi(MAX_SCAN_STEPS as i32),
    })
}

pub fn turning_points(model: &ModelSpec, energy: f64) -> Result<TurningPoints> {
    check_energy(model, energy)?;
    let tp = match *model.params() {
        ModelParams::Box { width, .. } => {
            TurningPoints { energy, x_minus: 0.0, x_plus: width, left: Boundary::HardWall, right: Boundary::HardWall }
        }
        ModelParams::Hydrogenoid { .. } => TurningPoints {
            energy,
            x_minus: 0.0,
            x_plus: scan_side(model, energy, 1.0)?,
            left: Boundary::Singular,
            right: Boundary::Smooth,
        },
        _ => TurningPoints {
            energy,
            x_minus: scan_side(model, energy, -1.0)?,
            x_plus: scan_side(model, energy, 1.0)?,
            left: Boundary::Smooth,
            right: Boundary::Smooth,
        },
    };
    verify_allowed(model, &tp)?;
    Ok(tp)
}

/// `E - U(x)` computed as `(E - U_min) - (U(x) - U_min)` when the minimum
/// is finite, which keeps the integrands smooth near the well bottom.
fn excess_energy(model: &ModelSpec, energy: f64, x: f64) -> Option<f64> {
    let (_, umin) = model.well_minimum();
    let height = model.height_above_minimum(x)?;
    if umin.is_finite() {
        Some((energy - umin) - height)
    } else {
        Some(energy - height)
    }
}

/// Checks that `U < E` on a grid strictly inside the turning points.
fn verify_allowed(model: &ModelSpec, tp: &TurningPoints) -> Result<()> {
    if model.kind() == ModelKind::Box {
        return Ok(());
    }
    let width = tp.x_plus - tp.x_minus;
    for i in 1..64 {
        let x = tp.x_minus + width * i as f64 / 64.0;
        if excess_energy(model, tp.energy, x).is_none_or(|e| e <= 0.0) {
            return Err(Error::RootNotBracketed { energy: tp.energy, steps: 0, last_probe: x });
        }
    }
    Ok(())
}

/// `∫ g(E - U(x)) dx` over the classically allowed interval, after the
/// sin² substitution. Near each smooth turning point `E - U` is evaluated as
/// `-(U(x± + d) - U(x±))` with `d` taken directly from `θ`, so it does not
/// cancel as the turning point is approached.
fn allowed_integral<G: Fn(f64) -> f64>(model: &ModelSpec, tp: &TurningPoints, g: G) -> Result<f64> {
    let width = tp.x_plus - tp.x_minus;
    if width <= 0.0 {
        return Ok(0.0);
    }
    let excess = |theta: f64| -> f64 {
        let (s, c) = theta.sin_cos();
        let value = if theta <= FRAC_PI_4 {
            let d = width * s * s;
            match tp.left {
                Boundary::Smooth => model.potential_step(tp.x_minus, d).map(|u| -u),
                _ => excess_energy(model, tp.energy, tp.x_minus + d),
            }
        } else {
            let d = width * c * c;
            match tp.right {
                Boundary::Smooth => model.potential_step(tp.x_plus, -d).map(|u| -u),
                _ => excess_energy(model, tp.energy, tp.x_plus - d),
            }
        };
        value.map_or(0.0, |e| e.max(0.0))
    };
    let integrand = |theta: f64| g(excess(theta)) * width * (2.0 * theta).sin();

    // Sampled potentials are only C¹ at their nodes; split there.
    let mut breaks = vec![0.0];
    if let ModelParams::NumericPotential { ref table, .. } = *model.params() {
        for &x in table.xs() {
            if x > tp.x_minus && x < tp.x_plus {
                breaks.push(((x - tp.x_minus) / width).sqrt().asin());
            }
        }
    }
    breaks.push(FRAC_PI_2);

    let mut total = crate::numeric::sum::Neumaier::default();
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            total.add(quad::integrate(integrand, w[0], w[1], QUAD_TARGET, QUAD_ACCEPT)?.value);
        }
    }
    Ok(total.total())
}

/// `I(E) = ∮ p dx = 2 ∫ √(2m(E - U)) dx` in the model's units.
pub fn action(model: &ModelSpec, energy: f64) -> Result<f64> {
    let m = model.mass();
    if let ModelParams::Box { width, .. } = *model.params() {
        check_energy(model, energy)?;
        return Ok(2.0 * width * (2.0 * m * energy).sqrt());
    }
    let tp = turning_points(model, energy)?;
    let root_2m = (2.0 * m).sqrt();
    Ok(2.0 * root_2m * allowed_integral(model, &tp, f64::sqrt)?)
}

/// Period integral in coherent time units.
fn period_coherent(model: &ModelSpec, energy: f64) -> Result<f64> {
    let m = model.mass();
    if let ModelParams::Box { width, .. } = *model.params() {
        check_energy(model, energy)?;
        return Ok(width * (2.0 * m / energy).sqrt());
    }
    let tp = turning_points(model, energy)?;
    let root_2m = (2.0 * m).sqrt();
    Ok(root_2m * allowed_integral(model, &tp, |e| if e > 0.0 { 1.0 / e.sqrt() } else { 0.0 })?)
}

/// Richardson-extrapolated centred difference of `I(E)`.
fn action_derivative(model: &ModelSpec, energy: f64) -> Result<f64> {
    let (lower, upper) = energy_window(model);
    let mut room = f64::INFINITY;
    if lower.is_finite() {
        room = room.min(energy - lower);
    }
    if upper.is_finite() {
        room = room.min(upper - energy);
    }
    if !room.is_finite() {
        room = energy.abs().max(model.energy_scale());
    }
    // Small enough that sampled potentials rarely move a turning point
    // across a node, where I''(E) is discontinuous.
    let h = 1e-4 * room;
    let d = |step: f64| -> Result<f64> {
        let (up, down) = (energy + step, energy - step);
        Ok((action(model, up)? - action(model, down)?) / (up - down))
    };
    let coarse = d(h)?;
    let fine = d(0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// `τ(E) = √(2m) ∫ dx / √(E - U)`, self-checked against `dI/dE`.
pub fn period_of_energy(model: &ModelSpec, energy: f64) -> Result<PeriodEstimate> {
    let tau = period_coherent(model, energy)?;
    let derivative = action_derivative(model, energy)?;
    let check_residual = (tau - derivative).abs() / tau;
    if !(check_residual <= PERIOD_CHECK_TOLERANCE) {
        return Err(Error::PeriodSelfCheck { energy, residual: check_residual });
    }
    Ok(PeriodEstimate { energy, tau: tau * model.units().time_scale(), check_residual })
}

/// Samples `I(E)` and `dI/dE` on the given energies (sorted ascending).
pub fn action_curve(model: &ModelSpec, energies: &[f64]) -> Result<ActionCurve> {
    let mut sorted = energies.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut samples = Vec::with_capacity(sorted.len());
    let mut derivative = Vec::with_capacity(sorted.len());
    for e in sorted {
        samples.push((e, action(model, e)?));
        derivative.push(period_coherent(model, e)?);
    }
    Ok(ActionCurve { samples, derivative })
}

/// Solves `I(E) = 2πħ(n + ν/4)` for `E`.
pub fn quantize(model: &ModelSpec, n: i64, maslov: Maslov) -> Result<EnergyLevel> {
    let hbar = model.units().hbar_coherent();
    let target = 2.0 * PI * hbar * (n as f64 + maslov.quarter_phase());
    if n < 0 || !(target > 0.0) {
        return Err(Error::ActionOutOfRange { n });
    }
    let (lower, upper) = energy_window(model);
    let scale = model.energy_scale();
    let residual = |e: f64| action(model, e).map(|i| i - target);

    // Lower bracket: the well bottom has zero action.
    let lo = if lower.is_finite() {
        lower
    } else {
        let mut e = upper - scale;
        let mut k = 0;
        while residual(e)? >= 0.0 {
            e = upper - (e - upper).abs() * 2.0;
            k += 1;
            if k > MAX_SCAN_STEPS {
                return Err(Error::ActionOutOfRange { n });
            }
        }
        e
    };

    // Upper bracket: geometric approach to the ceiling, or expansion.
    let mut hi = None;
    let steps = if upper.is_finite() { 52 } else { MAX_SCAN_STEPS as i32 };
    for k in 1..=steps {
        let e = if upper.is_finite() { upper - (upper - lo) * 2f64.powi(-k) } else { lo + scale * 2f64.powi(k - 1) };
        if upper.is_finite() && e >= upper {
            break;
        }
        match residual(e) {
            Ok(r) if r > 0.0 => {
                hi = Some(e);
                break;
            }
            Ok(_) => {}
            // Within rounding of the ceiling the orbit is no longer resolvable.
            Err(_) if upper.is_finite() => break,
            Err(err) => return Err(err),
        }
    }
    let hi = hi.ok_or(Error::ActionOutOfRange { n })?;

    let xtol = 1e-15 * hi.abs().max(lo.abs().min(scale)).max(f64::MIN_POSITIVE);
    let lo_open = if lower.is_finite() { lo + f64::EPSILON * (hi - lo) } else { lo };
    let f = |e: f64| if e <= lower { -target } else { residual(e).unwrap_or(f64::NAN) };
    let df = |e: f64| period_coherent(model, e).unwrap_or(f64::NAN);
    let (energy, _) = roots::newton_bisect(f, df, lo_open.min(lo), hi, xtol);
    let check = residual(energy)?;
    if !check.is_finite() {
        return Err(Error::ActionOutOfRange { n });
    }
    Ok(EnergyLevel { n, energy, bound: energy < upper })
}

/// Semiclassical levels `n_min ..` until the well runs out of action or
/// `n_limit` is reached.
pub fn semiclassical_levels(model: &ModelSpec, n_limit: i64, maslov: Maslov) -> Result<Vec<EnergyLevel>> {
    let mut out = Vec::new();
    for n in model.n_min()..=n_limit {
        match quantize(model, n, maslov) {
            Ok(level) => out.push(level),
            Err(Error::ActionOutOfRange { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
