//! Supported one-dimensional bound systems.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::MonotoneCubic;
use crate::units::{Dimension, UnitSystem};

/// Kind-specific parameters, in the energy/length/mass units of the model's
/// [`UnitSystem`].
#[derive(Debug, Clone, PartialEq)]
pub enum ModelParams {
    /// Infinite square well on `[0, width]`.
    Box { mass: f64, width: f64 },
    /// `U = k x² / 2`.
    Harmonic { mass: f64, stiffness: f64 },
    /// Radial s-wave Coulomb problem `U = -Z e² / x`, `x > 0`.
    Hydrogenoid { reduced_mass: f64, charge_number: u32, elementary_charge: f64 },
    /// `U = D (e^{-2αx} - 2 e^{-αx})`.
    Morse { mass: f64, depth: f64, range: f64 },
    /// Sampled potential, interpolated by monotone cubics.
    NumericPotential { mass: f64, table: MonotoneCubic },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Box,
    Harmonic,
    Hydrogenoid,
    Morse,
    #[serde(rename = "numeric")]
    NumericPotential,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Box => "box",
            ModelKind::Harmonic => "harmonic",
            ModelKind::Hydrogenoid => "hydrogenoid",
            ModelKind::Morse => "morse",
            ModelKind::NumericPotential => "numeric",
        }
    }
}

/// A validated model: parameters plus unit system. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    params: ModelParams,
    units: UnitSystem,
    /// Interior minimum of a numeric potential, `(x, U)`.
    numeric_minimum: Option<(f64, f64)>,
}

impl ModelSpec {
    pub fn new(params: ModelParams, units: UnitSystem) -> Result<Self> {
        let positive = |name: &str, v: f64| -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(format!("params.{name}"), format!("must be finite and > 0, got {v}")))
            }
        };
        let mut numeric_minimum = None;
        match &params {
            ModelParams::Box { mass, width } => {
                positive("mass", *mass)?;
                positive("width", *width)?;
            }
            ModelParams::Harmonic { mass, stiffness } => {
                positive("mass", *mass)?;
                positive("stiffness", *stiffness)?;
            }
            ModelParams::Hydrogenoid { reduced_mass, charge_number, elementary_charge } => {
                positive("reduced_mass", *reduced_mass)?;
                positive("elementary_charge", *elementary_charge)?;
                if *charge_number < 1 {
                    return Err(Error::invalid("params.charge_number", "must be an integer >= 1"));
                }
            }
            ModelParams::Morse { mass, depth, range } => {
                positive("mass", *mass)?;
                positive("depth", *depth)?;
                positive("range", *range)?;
            }
            ModelParams::NumericPotential { mass, table } => {
                positive("mass", *mass)?;
                numeric_minimum = Some(interior_minimum(table)?);
            }
        }
        if !(units.hbar.is_finite() && units.hbar > 0.0) {
            return Err(Error::invalid("units", "hbar must be > 0"));
        }
        let spec = ModelSpec { params, units, numeric_minimum };
        if let ModelParams::Morse { .. } = spec.params {
            let zeta = spec.morse_zeta();
            if !(zeta > 1.0) {
                return Err(Error::invalid(
                    "params",
                    format!("Morse well supports no bound state (zeta = {zeta} <= 1)"),
                ));
            }
        }
        Ok(spec)
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn units(&self) -> &UnitSystem {
        &self.units
    }

    pub fn kind(&self) -> ModelKind {
        match self.params {
            ModelParams::Box { .. } => ModelKind::Box,
            ModelParams::Harmonic { .. } => ModelKind::Harmonic,
            ModelParams::Hydrogenoid { .. } => ModelKind::Hydrogenoid,
            ModelParams::Morse { .. } => ModelKind::Morse,
            ModelParams::NumericPotential { .. } => ModelKind::NumericPotential,
        }
    }

    /// ħ in display units.
    pub fn hbar(&self) -> f64 {
        self.units.hbar
    }

    pub fn mass(&self) -> f64 {
        match self.params {
            ModelParams::Box { mass, .. }
            | ModelParams::Harmonic { mass, .. }
            | ModelParams::Morse { mass, .. }
            | ModelParams::NumericPotential { mass, .. } => mass,
            ModelParams::Hydrogenoid { reduced_mass, .. } => reduced_mass,
        }
    }

    /// Smallest valid quantum number: 1 for box and hydrogenoid, 0 otherwise.
    pub fn n_min(&self) -> i64 {
        match self.kind() {
            ModelKind::Box | ModelKind::Hydrogenoid => 1,
            _ => 0,
        }
    }

    /// Largest valid quantum number, `None` when unbounded (or, for numeric
    /// potentials, only known through the semiclassical engine).
    pub fn n_max(&self) -> Option<i64> {
        match self.params {
            ModelParams::Morse { .. } => {
                let half_zeta = 0.5 * self.morse_zeta();
                Some(((half_zeta - 0.5).ceil() as i64 - 1).max(0))
            }
            _ => None,
        }
    }

    /// Angular frequency in coherent units (harmonic and Morse small-oscillation).
    pub(crate) fn omega_coherent(&self) -> Option<f64> {
        match self.params {
            ModelParams::Harmonic { mass, stiffness } => Some((stiffness / mass).sqrt()),
            ModelParams::Morse { mass, depth, range } => Some(range * (2.0 * depth / mass).sqrt()),
            _ => None,
        }
    }

    /// Angular frequency in inverse display-time units.
    pub fn omega(&self) -> Option<f64> {
        self.omega_coherent().map(|w| w / self.units.time_scale())
    }

    /// Morse anharmonicity parameter `ζ = 4D/(ħω)`; the level formula
    /// `E(n) = -D + ħω[(n+½) - (n+½)²/ζ]` is then the exact Morse spectrum.
    pub fn morse_zeta(&self) -> f64 {
        match self.params {
            ModelParams::Morse { depth, .. } => {
                4.0 * depth / (self.units.hbar_coherent() * self.omega_coherent().unwrap_or(f64::NAN))
            }
            _ => f64::NAN,
        }
    }

    /// Potential energy at `x`; `None` where the particle cannot be
    /// (outside the box, `x <= 0` for Coulomb, outside a sampled table).
    pub fn potential(&self, x: f64) -> Option<f64> {
        match &self.params {
            ModelParams::Box { width, .. } => ((0.0..=*width).contains(&x)).then_some(0.0),
            ModelParams::Harmonic { stiffness, .. } => Some(0.5 * stiffness * x * x),
            ModelParams::Hydrogenoid { charge_number, elementary_charge, .. } => {
                (x > 0.0).then(|| -(*charge_number as f64) * elementary_charge * elementary_charge / x)
            }
            ModelParams::Morse { depth, range, .. } => {
                let e = (-range * x).exp();
                Some(depth * (e * e - 2.0 * e))
            }
            ModelParams::NumericPotential { table, .. } => table.eval(x),
        }
    }

    /// `U(x) - U_min`, evaluated without cancellation where the closed form
    /// allows it. For the Coulomb well (no finite minimum) this is `U(x)`.
    pub fn height_above_minimum(&self, x: f64) -> Option<f64> {
        match &self.params {
            ModelParams::Morse { depth, range, .. } => {
                let d = (-range * x).exp_m1();
                Some(depth * d * d)
            }
            ModelParams::Hydrogenoid { .. } => self.potential(x),
            _ => {
                let (_, umin) = self.well_minimum();
                self.potential(x).map(|u| u - umin)
            }
        }
    }

    /// `U(x + d) - U(x)`, accurate for small `d` where the closed form allows.
    pub fn potential_step(&self, x: f64, d: f64) -> Option<f64> {
        match &self.params {
            ModelParams::Harmonic { stiffness, .. } => Some(stiffness * d * (x + 0.5 * d)),
            ModelParams::Hydrogenoid { charge_number, elementary_charge, .. } => {
                let y = x + d;
                (x > 0.0 && y > 0.0)
                    .then(|| *charge_number as f64 * elementary_charge * elementary_charge * d / (x * y))
            }
            ModelParams::Morse { depth, range, .. } => {
                // e^{-a(x+d)} - e^{-ax} = e^{-ax} expm1(-a d)
                let ex = (-range * x).exp();
                let step1 = ex * (-range * d).exp_m1();
                let step2 = ex * ex * (-2.0 * range * d).exp_m1();
                Some(depth * (step2 - 2.0 * step1))
            }
            ModelParams::NumericPotential { table, .. } => table.step(x, d),
            ModelParams::Box { .. } => self.potential(x + d).and_then(|u1| self.potential(x).map(|u0| u1 - u0)),
        }
    }

    /// Location and value of the potential minimum. The Coulomb well has no
    /// finite minimum and reports `(0, -inf)`.
    pub fn well_minimum(&self) -> (f64, f64) {
        match &self.params {
            ModelParams::Box { width, .. } => (0.5 * width, 0.0),
            ModelParams::Harmonic { .. } => (0.0, 0.0),
            ModelParams::Hydrogenoid { .. } => (0.0, f64::NEG_INFINITY),
            ModelParams::Morse { depth, .. } => (0.0, -depth),
            ModelParams::NumericPotential { .. } => self.numeric_minimum.expect("validated numeric model"),
        }
    }

    /// Energy above which motion is no longer bound (or leaves the table).
    pub fn ceiling_energy(&self) -> f64 {
        match &self.params {
            ModelParams::Box { .. } | ModelParams::Harmonic { .. } => f64::INFINITY,
            ModelParams::Hydrogenoid { .. } | ModelParams::Morse { .. } => 0.0,
            ModelParams::NumericPotential { table, .. } => {
                let (xmin, _) = self.well_minimum();
                let xs = table.xs();
                let ys = table.ys();
                let left =
                    xs.iter().zip(ys).filter(|(x, _)| **x <= xmin).map(|(_, y)| *y).fold(f64::NEG_INFINITY, f64::max);
                let right =
                    xs.iter().zip(ys).filter(|(x, _)| **x >= xmin).map(|(_, y)| *y).fold(f64::NEG_INFINITY, f64::max);
                left.min(right)
            }
        }
    }

    /// A characteristic energy used to scale numerical searches.
    pub fn energy_scale(&self) -> f64 {
        let hbar = self.units.hbar_coherent();
        match &self.params {
            ModelParams::Box { mass, width } => {
                hbar * hbar * std::f64::consts::PI.powi(2) / (2.0 * mass * width * width)
            }
            ModelParams::Harmonic { .. } => hbar * self.omega_coherent().unwrap_or(1.0),
            ModelParams::Hydrogenoid { reduced_mass, charge_number, elementary_charge } => {
                let z = *charge_number as f64;
                reduced_mass * z * z * elementary_charge.powi(4) / (hbar * hbar)
            }
            ModelParams::Morse { depth, .. } => *depth,
            ModelParams::NumericPotential { .. } => self.ceiling_energy() - self.well_minimum().1,
        }
    }

    /// The same physical system expressed in another unit system.
    pub fn convert_to(&self, target: &UnitSystem) -> Result<ModelSpec> {
        let f = |dim: Dimension| self.units.factor_to(target, dim);
        let params = match &self.params {
            ModelParams::Box { mass, width } => {
                ModelParams::Box { mass: mass * f(Dimension::MASS), width: width * f(Dimension::LENGTH) }
            }
            ModelParams::Harmonic { mass, stiffness } => ModelParams::Harmonic {
                mass: mass * f(Dimension::MASS),
                stiffness: stiffness * f(Dimension::STIFFNESS),
            },
            ModelParams::Hydrogenoid { reduced_mass, charge_number, elementary_charge } => ModelParams::Hydrogenoid {
                reduced_mass: reduced_mass * f(Dimension::MASS),
                charge_number: *charge_number,
                elementary_charge: elementary_charge * f(Dimension::CHARGE),
            },
            ModelParams::Morse { mass, depth, range } => ModelParams::Morse {
                mass: mass * f(Dimension::MASS),
                depth: depth * f(Dimension::ENERGY),
                range: range * f(Dimension::INVERSE_LENGTH),
            },
            ModelParams::NumericPotential { mass, table } => {
                let lx = f(Dimension::LENGTH);
                let le = f(Dimension::ENERGY);
                ModelParams::NumericPotential {
                    mass: mass * f(Dimension::MASS),
                    table: MonotoneCubic::new(
                        table.xs().iter().map(|x| x * lx).collect(),
                        table.ys().iter().map(|u| u * le).collect(),
                    )?,
                }
            }
        };
        ModelSpec::new(params, target.clone())
    }
}

fn interior_minimum(table: &MonotoneCubic) -> Result<(f64, f64)> {
    let ys = table.ys();
    let (imin, umin) =
        ys.iter().copied().enumerate().fold((0, f64::INFINITY), |acc, (i, y)| if y < acc.1 { (i, y) } else { acc });
    if imin == 0 || imin == ys.len() - 1 {
        return Err(Error::invalid("params.u", "potential must attain an interior minimum"));
    }
    if !(ys[0] > umin && ys[ys.len() - 1] > umin) {
        return Err(Error::invalid("params.u", "potential must rise on both sides of its minimum"));
    }
    // Slopes vanish at sampled extrema, so the node is the interpolant's minimum.
    Ok((table.xs()[imin], umin))
}
