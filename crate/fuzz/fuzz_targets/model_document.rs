#![no_main]

use libfuzzer_sys::fuzz_target;
use speclimit::config::parse_model_document;
use speclimit::spectrum;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(model) = parse_model_document(text) else { return };
    let n = model.n_min();
    if let Ok(level) = spectrum::energy_level(&model, n) {
        assert!(!level.energy.is_nan());
    }
    let _ = model.potential(0.5);
});
