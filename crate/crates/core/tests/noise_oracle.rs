use std::f64::consts::PI;

use speclimit::model::{ModelParams, ModelSpec};
use speclimit::noise::{
    characteristic_factor, empirical_characteristic, energy_error_bracket, harmonic_energy_error, reconstruct_state,
    required_noise_product_for_resolution, sample_ensemble, GaussianState, Quadrature,
};
use speclimit::UnitSystem;

fn oscillator() -> ModelSpec {
    ModelSpec::new(ModelParams::Harmonic { mass: 1.0, stiffness: 1.0 }, UnitSystem::oscillator()).unwrap()
}

#[test]
fn ensemble_mean_identity() {
    let n = 100_000;
    for (seed, dx) in (100..).zip([0.25, 0.5, 1.0, 2.0]) {
        let ens = sample_ensemble(Quadrature::Position, 0.0, dx, n, seed).unwrap();
        for &p in &[0.1, 0.5, 1.0, 1.5, 2.5] {
            let (re, im, se) = empirical_characteristic(&ens, p, 1.0);
            let exact = characteristic_factor(dx, p, 1.0);
            assert!((re - exact).abs() <= 3.0 * se, "dx={dx} p={p}: {re} vs {exact}");
            assert!(im.abs() <= 3.0 * se, "dx={dx} p={p}: im {im}");
        }
    }
}

#[test]
fn reconstruction_recovers_centres() {
    let n = 100_000;
    let pos = sample_ensemble(Quadrature::Position, 2.0, 0.5, n, 5).unwrap();
    let mom = sample_ensemble(Quadrature::Momentum, -1.0, 1.2, n, 5).unwrap();
    let s = reconstruct_state(&pos, &mom, 1.0).unwrap();
    let se = 1.0 / (n as f64).sqrt();
    assert!((s.r - 2.0).abs() < 4.0 * 0.5 * se);
    assert!((s.d + 1.0).abs() < 4.0 * 1.2 * se);
    assert!((s.product_over_hbar - 0.6).abs() < 0.02);
    assert!(!s.sub_sql);
    assert!((s.position_normalization().unwrap() - 1.0).abs() < 1e-8);
}

#[test]
fn normalization_over_widths() {
    for &w in &[1e-6, 1e-2, 0.5, 1.0, 30.0, 1e4] {
        let s = GaussianState { r: 3.0, d: 0.0, delta_x: w, delta_p: 1.0, product_over_hbar: w, sub_sql: false };
        assert!((s.position_normalization().unwrap() - 1.0).abs() < 1e-8, "width {w}");
    }
}

#[test]
fn sub_sql_flag_matches_product() {
    let pos = sample_ensemble(Quadrature::Position, 0.0, 1.0, 50, 1).unwrap();
    let (_, sx) = pos.mean_and_std();
    for &target in &[0.3, 0.5 - 1e-9, 0.5, 0.5 + 1e-9, 0.9] {
        // momentum ensemble with exact prescribed sample std
        let sp = target / sx;
        let samples = [-sp, sp];
        let mom = speclimit::noise::MeasurementEnsemble::new(
            Quadrature::Momentum,
            samples.iter().map(|v| v / 2f64.sqrt()).collect(),
            0,
            0.0,
            sp,
        )
        .unwrap();
        let s = reconstruct_state(&pos, &mom, 1.0).unwrap();
        assert_eq!(s.sub_sql, s.product_over_hbar < 0.5 - 1e-12);
        assert!((s.product_over_hbar - target).abs() < 1e-12);
    }
}

#[test]
fn energy_error_identity_on_phase_grid() {
    let (m, k, hbar, a): (f64, f64, f64, f64) = (1.3, 0.7, 1.0, 0.45);
    let omega = (k / m).sqrt();
    let energy: f64 = 2.5;
    let (pa, qa) = ((2.0 * m * energy).sqrt(), (2.0 * energy / k).sqrt());
    let dp = (m * hbar * omega / 2.0).sqrt() * a;
    let dq = (hbar / (2.0 * m * omega)).sqrt() * a;
    assert!((dp * dq - a * a * hbar / 2.0).abs() < 1e-15);
    for i in 0..1000 {
        let phi = 2.0 * PI * i as f64 / 1000.0;
        let (q, p) = (qa * phi.sin(), pa * phi.cos());
        let de = harmonic_energy_error(q, p, m, k, a, hbar);
        let b = energy_error_bracket(q, p, m, k, hbar);
        let rhs = 2.0 / hbar * b * b * dp * dq;
        assert!((de * de - rhs).abs() <= 1e-12 * rhs, "phase {phi}");
    }
}

fn scanned_product(n: i64) -> f64 {
    let hbar: f64 = 1.0;
    let energy = hbar * (n as f64 + 0.5);
    let (pa, qa) = ((2.0 * energy).sqrt(), (2.0 * energy).sqrt());
    let worst = (0..10_000)
        .map(|i| {
            let phi = 2.0 * PI * i as f64 / 10_000.0;
            energy_error_bracket(qa * phi.sin(), pa * phi.cos(), 1.0, 1.0, hbar)
        })
        .fold(0.0, f64::max);
    0.25 / (2.0 * worst * worst)
}

#[test]
fn noise_product_matches_phase_scan() {
    let m = oscillator();
    for n in [0, 1, 2, 5, 10, 100, 1000] {
        let lib = required_noise_product_for_resolution(&m, n).unwrap();
        let closed = 1.0 / (16.0 * (n as f64 + 0.5));
        let scan = scanned_product(n);
        assert!((scan - closed).abs() <= 1e-9 * closed, "n={n} scan {scan}");
        assert!((lib - closed).abs() <= 1e-9 * closed, "n={n} lib {lib}");
    }
}

#[test]
fn noise_product_below_sql() {
    let m = oscillator();
    let mut last = f64::INFINITY;
    for n in 0..=1000 {
        let v = required_noise_product_for_resolution(&m, n).unwrap();
        assert!(v < 0.5 && v < last);
        last = v;
    }
}
