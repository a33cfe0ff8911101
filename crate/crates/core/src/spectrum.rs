//! Closed-form energy levels and classical periods.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelKind, ModelParams, ModelSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyLevel {
    pub n: i64,
    pub energy: f64,
    pub bound: bool,
}

/// Classical period of the orbit at the energy of level `n`, display units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodPoint {
    pub n: i64,
    pub tau: f64,
}

fn check_range(model: &ModelSpec, n: i64) -> Result<()> {
    if model.kind() == ModelKind::NumericPotential {
        return Err(Error::Unsupported { kind: "numeric", what: "closed-form levels; use the semiclassical engine" });
    }
    let min = model.n_min();
    let max = model.n_max().unwrap_or(i64::MAX);
    if n < min || n > max {
        return Err(Error::OutOfRange { n, min, max });
    }
    Ok(())
}

pub fn energy_level(model: &ModelSpec, n: i64) -> Result<EnergyLevel> {
    check_range(model, n)?;
    let hbar = model.units().hbar_coherent();
    let nf = n as f64;
    let energy = match *model.params() {
        ModelParams::Box { mass, width } => hbar * hbar * nf * nf * PI * PI / (2.0 * mass * width * width),
        ModelParams::Harmonic { .. } => hbar * model.omega_coherent().unwrap() * (nf + 0.5),
        ModelParams::Hydrogenoid { reduced_mass, charge_number, elementary_charge } => {
            let z = charge_number as f64;
            -reduced_mass * z * z * elementary_charge.powi(4) / (2.0 * hbar * hbar * nf * nf)
        }
        ModelParams::Morse { depth, .. } => {
            let hw = hbar * model.omega_coherent().unwrap();
            let v = nf + 0.5;
            -depth + hw * (v - v * v / model.morse_zeta())
        }
        ModelParams::NumericPotential { .. } => unreachable!("rejected by check_range"),
    };
    Ok(EnergyLevel { n, energy, bound: true })
}

pub fn classical_period(model: &ModelSpec, n: i64) -> Result<PeriodPoint> {
    check_range(model, n)?;
    let hbar = model.units().hbar_coherent();
    let nf = n as f64;
    let tau = match *model.params() {
        ModelParams::Box { mass, width } => 2.0 * width * width * mass / (hbar * nf * PI),
        ModelParams::Harmonic { mass, stiffness } => 2.0 * PI * (mass / stiffness).sqrt(),
        ModelParams::Hydrogenoid { reduced_mass, charge_number, elementary_charge } => {
            let z = charge_number as f64;
            2.0 * PI * hbar.powi(3) * nf.powi(3) / (reduced_mass * z * z * elementary_charge.powi(4))
        }
        ModelParams::Morse { mass, range, .. } => {
            let e = energy_level(model, n)?.energy.abs();
            2.0 * PI * (mass / (2.0 * e * range * range)).sqrt()
        }
        ModelParams::NumericPotential { .. } => unreachable!("rejected by check_range"),
    };
    Ok(PeriodPoint { n, tau: tau * model.units().time_scale() })
}

/// All valid levels from `n_min` up to `n_limit` (inclusive), stopping at the
/// Morse `n_max`.
pub fn bound_levels(model: &ModelSpec, n_limit: i64) -> Vec<EnergyLevel> {
    let top = model.n_max().map_or(n_limit, |m| m.min(n_limit));
    (model.n_min()..=top).filter_map(|n| energy_level(model, n).ok()).collect()
}
