#![no_main]

use libfuzzer_sys::fuzz_target;
use relmap::store::{parse_entities, write_entities};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(catalog) = parse_entities(text, "fuzz") {
        // Whatever parses must survive a write/parse round trip.
        let again = parse_entities(&write_entities(&catalog), "again").expect("reparse");
        assert_eq!(again.len(), catalog.len());
    }
});
