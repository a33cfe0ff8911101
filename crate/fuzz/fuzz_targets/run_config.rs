#![no_main]

use libfuzzer_sys::fuzz_target;
use speclimit::config::RunConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((config, model)) = RunConfig::load(text) {
        // a validated config must survive a serialisation round trip
        let again = serde_json::to_string(&config).unwrap();
        let (_, model2) = RunConfig::load(&again).unwrap();
        assert_eq!(model.kind(), model2.kind());
    }
});
