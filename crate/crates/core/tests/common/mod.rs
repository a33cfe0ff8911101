#![allow(dead_code)]

use speclimit::{ModelParams, ModelSpec, UnitSystem};

pub fn box_model() -> ModelSpec {
    ModelSpec::new(ModelParams::Box { mass: 1.0, width: 1.0 }, UnitSystem::natural_box()).unwrap()
}

pub fn harmonic() -> ModelSpec {
    ModelSpec::new(ModelParams::Harmonic { mass: 1.0, stiffness: 1.0 }, UnitSystem::oscillator()).unwrap()
}

pub fn hydrogen() -> ModelSpec {
    ModelSpec::new(
        ModelParams::Hydrogenoid { reduced_mass: 1.0, charge_number: 1, elementary_charge: 1.0 },
        UnitSystem::atomic(),
    )
    .unwrap()
}

pub fn morse_h2() -> ModelSpec {
    ModelSpec::new(ModelParams::Morse { mass: 0.50391, depth: 4.7446, range: 1.9426 }, UnitSystem::molecular()).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

pub fn logspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp()).collect()
}

/// 50 energies spread logarithmically over the bound range of each model.
pub fn probe_energies(model: &ModelSpec) -> Vec<f64> {
    use speclimit::ModelKind::*;
    let scale = model.energy_scale();
    match model.kind() {
        Box | Harmonic => logspace(1e-3 * scale, 1e3 * scale, 50),
        Hydrogenoid => logspace(1e-3 * scale, 1e2 * scale, 50).into_iter().map(|e| -e).collect(),
        Morse => {
            let d = scale;
            logspace(1e-6 * d, 0.999 * d, 50).into_iter().map(|h| -d + h).collect()
        }
        NumericPotential => {
            let (_, umin) = model.well_minimum();
            let top = model.ceiling_energy();
            logspace(1e-4 * (top - umin), 0.9 * (top - umin), 50).into_iter().map(|h| umin + h).collect()
        }
    }
}
