#![no_main]

use libfuzzer_sys::fuzz_target;
use relmap::baseline::{parse_relations, write_relations};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(rel) = parse_relations(text, "fuzz") {
        let again = parse_relations(&write_relations(&rel), "again").expect("reparse");
        assert_eq!(again, rel);
    }
});
