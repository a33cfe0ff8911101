#![no_main]

//! Input: little-endian f64 pairs `(x, u)`, then one probe abscissa.

use libfuzzer_sys::fuzz_target;
use speclimit::interp::MonotoneCubic;
use speclimit::{ModelParams, ModelSpec, UnitSystem};

fuzz_target!(|data: &[u8]| {
    let values: Vec<f64> = data.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    if values.len() < 7 {
        return;
    }
    let probe = values[values.len() - 1];
    let pairs = &values[..values.len() - 1];
    let (xs, us): (Vec<f64>, Vec<f64>) = pairs.chunks_exact(2).map(|p| (p[0], p[1])).unzip();
    let Ok(table) = MonotoneCubic::new(xs, us) else { return };
    if let Some(v) = table.eval(probe) {
        let (lo, hi) = table.ys().iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(*y), b.max(*y)));
        assert!(v.is_nan() || (v >= lo - 1e-9 * (hi - lo).abs() && v <= hi + 1e-9 * (hi - lo).abs()));
    }
    let _ = ModelSpec::new(ModelParams::NumericPotential { mass: 1.0, table }, UnitSystem::oscillator());
});
