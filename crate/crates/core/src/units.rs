//! Unit systems.
//!
//! Every model carries a [`UnitSystem`]. Parameters are stored in that
//! system's energy, length and mass units; periods are reported in its
//! display time unit. Internally the formulas run in the coherent time unit
//! `length * sqrt(mass / energy)`, which differs from the display unit only
//! for the `molecular` system (eV, Å, amu, fs).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant, J s (CODATA 2018, exact by SI definition).
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Electron volt, J (exact).
pub const ELECTRON_VOLT_SI: f64 = 1.602_176_634e-19;
/// Unified atomic mass unit, kg (CODATA 2018).
pub const ATOMIC_MASS_UNIT_SI: f64 = 1.660_539_066_60e-27;
/// Electron mass, kg (CODATA 2018).
pub const ELECTRON_MASS_SI: f64 = 9.109_383_701_5e-31;
/// Hartree energy, J (CODATA 2018).
pub const HARTREE_SI: f64 = 4.359_744_722_207_1e-18;
/// Bohr radius, m (CODATA 2018).
pub const BOHR_RADIUS_SI: f64 = 5.291_772_109_03e-11;

pub const ANGSTROM_SI: f64 = 1e-10;
pub const FEMTOSECOND_SI: f64 = 1e-15;
pub const NANOMETRE_SI: f64 = 1e-9;

/// A named system of units with its SI scale factors.
///
/// Built-in systems:
///
/// | name          | ħ      | energy                | length   | mass                  | time (display)   |
/// |---------------|--------|-----------------------|----------|-----------------------|------------------|
/// | `si`          | 1.0546e-34 | J                 | m        | kg                    | s                |
/// | `natural-box` | 1      | ħ²/(m_e nm²)          | 1 nm     | m_e                   | m_e nm²/ħ        |
/// | `oscillator`  | 1      | ħ/fs                  | √(ħ fs/m_e) | m_e                | 1 fs             |
/// | `atomic`      | 1      | hartree               | bohr     | E_h t²/a₀² (m_e to 2e-9) | ħ/E_h      |
/// | `molecular`   | ħ/(eV fs) | eV                 | Å        | amu                   | fs               |
///
/// In the natural systems the derived scale is computed from the others so
/// that ħ = 1 holds exactly rather than to the precision of CODATA.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    pub name: String,
    /// ħ in energy × display-time units.
    pub hbar: f64,
    pub energy_si: f64,
    pub length_si: f64,
    pub mass_si: f64,
    /// Display time unit in seconds.
    pub time_si: f64,
    /// Display time units per coherent time unit.
    time_scale: f64,
}

pub const BUILTIN_UNIT_SYSTEMS: [&str; 5] = ["si", "natural-box", "oscillator", "atomic", "molecular"];

impl UnitSystem {
    pub fn si() -> Self {
        UnitSystem {
            name: "si".into(),
            hbar: HBAR_SI,
            energy_si: 1.0,
            length_si: 1.0,
            mass_si: 1.0,
            time_si: 1.0,
            time_scale: 1.0,
        }
    }

    /// ħ = m = a = 1 with m the electron mass and a one nanometre.
    pub fn natural_box() -> Self {
        let mass = ELECTRON_MASS_SI;
        let length = NANOMETRE_SI;
        UnitSystem {
            name: "natural-box".into(),
            hbar: 1.0,
            energy_si: HBAR_SI * HBAR_SI / (mass * length * length),
            length_si: length,
            mass_si: mass,
            time_si: mass * length * length / HBAR_SI,
            time_scale: 1.0,
        }
    }

    /// ħ = m = ω = 1 with m the electron mass and ω = 1 fs⁻¹.
    pub fn oscillator() -> Self {
        let mass = ELECTRON_MASS_SI;
        let time = FEMTOSECOND_SI;
        UnitSystem {
            name: "oscillator".into(),
            hbar: 1.0,
            energy_si: HBAR_SI / time,
            length_si: (HBAR_SI * time / mass).sqrt(),
            mass_si: mass,
            time_si: time,
            time_scale: 1.0,
        }
    }

    /// Hartree atomic units: ħ = e = μ = 1, energies in hartree.
    pub fn atomic() -> Self {
        let time = HBAR_SI / HARTREE_SI;
        UnitSystem {
            name: "atomic".into(),
            hbar: 1.0,
            energy_si: HARTREE_SI,
            length_si: BOHR_RADIUS_SI,
            mass_si: HARTREE_SI * time * time / (BOHR_RADIUS_SI * BOHR_RADIUS_SI),
            time_si: time,
            time_scale: 1.0,
        }
    }

    /// eV, Å, amu with periods displayed in femtoseconds.
    pub fn molecular() -> Self {
        let coherent_time = ANGSTROM_SI * (ATOMIC_MASS_UNIT_SI / ELECTRON_VOLT_SI).sqrt();
        UnitSystem {
            name: "molecular".into(),
            hbar: HBAR_SI / (ELECTRON_VOLT_SI * FEMTOSECOND_SI),
            energy_si: ELECTRON_VOLT_SI,
            length_si: ANGSTROM_SI,
            mass_si: ATOMIC_MASS_UNIT_SI,
            time_si: FEMTOSECOND_SI,
            time_scale: coherent_time / FEMTOSECOND_SI,
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "si" => Ok(Self::si()),
            "natural-box" => Ok(Self::natural_box()),
            "oscillator" => Ok(Self::oscillator()),
            "atomic" => Ok(Self::atomic()),
            "molecular" => Ok(Self::molecular()),
            other => Err(Error::UnknownUnits(other.to_string())),
        }
    }

    /// ħ in energy × coherent-time units, the value the formulas use.
    pub fn hbar_coherent(&self) -> f64 {
        self.hbar / self.time_scale
    }

    /// Multiplies a coherent-unit time into display units.
    pub fn time_scale(&self) -> f64 {
        self.time_scale
    }

    /// Factor taking a quantity with the given dimension exponents from
    /// `self` into `target`.
    pub(crate) fn factor_to(&self, target: &UnitSystem, dim: Dimension) -> f64 {
        let ratio = |a: f64, b: f64, p: f64| if p == 0.0 { 1.0 } else { (a / b).powf(p) };
        ratio(self.energy_si, target.energy_si, dim.energy)
            * ratio(self.length_si, target.length_si, dim.length)
            * ratio(self.mass_si, target.mass_si, dim.mass)
            * ratio(self.time_si, target.time_si, dim.time)
    }
}

/// Exponents of energy, length, mass and display time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dimension {
    pub energy: f64,
    pub length: f64,
    pub mass: f64,
    pub time: f64,
}

impl Dimension {
    pub const ENERGY: Dimension = Dimension { energy: 1.0, length: 0.0, mass: 0.0, time: 0.0 };
    pub const LENGTH: Dimension = Dimension { energy: 0.0, length: 1.0, mass: 0.0, time: 0.0 };
    pub const INVERSE_LENGTH: Dimension = Dimension { energy: 0.0, length: -1.0, mass: 0.0, time: 0.0 };
    pub const MASS: Dimension = Dimension { energy: 0.0, length: 0.0, mass: 1.0, time: 0.0 };
    pub const STIFFNESS: Dimension = Dimension { energy: 1.0, length: -2.0, mass: 0.0, time: 0.0 };
    /// Gaussian-unit charge: e² has dimension energy × length.
    pub const CHARGE: Dimension = Dimension { energy: 0.5, length: 0.5, mass: 0.0, time: 0.0 };
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs())
    }

    #[test]
    fn builtins_have_consistent_hbar() {
        for name in BUILTIN_UNIT_SYSTEMS {
            let u = UnitSystem::by_name(name).unwrap();
            assert!(u.hbar > 0.0);
            let hbar_from_scales = HBAR_SI / (u.energy_si * u.time_si);
            assert!(close(u.hbar, hbar_from_scales, 1e-14), "{name}: {} vs {}", u.hbar, hbar_from_scales);
            let coherent = u.length_si * (u.mass_si / u.energy_si).sqrt();
            assert!(close(u.time_scale, coherent / u.time_si, 1e-14), "{name}");
        }
    }

    #[test]
    fn atomic_mass_scale_is_electron_mass() {
        let u = UnitSystem::atomic();
        assert!(close(u.mass_si, ELECTRON_MASS_SI, 2e-9));
    }

    #[test]
    fn molecular_hbar_in_ev_fs() {
        let u = UnitSystem::molecular();
        assert!(close(u.hbar, 0.658_211_956_9, 1e-9));
        // sqrt(amu/eV) Å ≈ 10.1805 fs
        assert!(close(u.time_scale, 10.180_505, 1e-6));
    }

    #[test]
    fn unknown_name_rejected() {
        assert_eq!(UnitSystem::by_name("cgs"), Err(Error::UnknownUnits("cgs".into())));
    }
}
