#![no_main]

use libfuzzer_sys::fuzz_target;
use spmat::matrix::SPermutationMatrix;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(value) = text.parse::<SPermutationMatrix>() {
        let shown = value.to_string();
        let again: SPermutationMatrix = shown.parse().expect("rendered value parses");
        assert_eq!(again.to_string(), shown);
    }
});
