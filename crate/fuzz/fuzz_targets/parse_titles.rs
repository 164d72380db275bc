#![no_main]

use libfuzzer_sys::fuzz_target;
use relmap::store::{parse_titles, write_titles};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(table) = parse_titles(text, "fuzz") {
        let again = parse_titles(&write_titles(&table), "again").expect("reparse");
        assert_eq!(again.len(), table.len());
    }
});
