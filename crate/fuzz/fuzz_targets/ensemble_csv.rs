#![no_main]

use libfuzzer_sys::fuzz_target;
use speclimit::io::{ensemble_from_csv, ensemble_to_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(ens) = ensemble_from_csv(text) else { return };
    // export is a fixed point after one import
    let once = ensemble_to_csv(&ens);
    let twice = ensemble_to_csv(&ensemble_from_csv(&once).unwrap());
    assert_eq!(once, twice);
});
