#![no_main]

use libfuzzer_sys::fuzz_target;
use spmat::golden::GoldenTable;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(table) = text.parse::<GoldenTable>() {
        for entry in &table.entries {
            assert!(entry.line >= 1 && entry.line <= text.lines().count());
            let _ = entry.label();
        }
    }
});
