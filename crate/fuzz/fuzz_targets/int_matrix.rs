#![no_main]

use libfuzzer_sys::fuzz_target;
use spmat::matrix::IntMatrix;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(value) = text.parse::<IntMatrix>() {
        let shown = value.to_string();
        let again: IntMatrix = shown.parse().expect("rendered value parses");
        assert_eq!(again.to_string(), shown);
    }
});
