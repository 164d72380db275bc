#![no_main]

use libfuzzer_sys::fuzz_target;
use relmap::store::{parse_occurrences, resolve_occurrences, UnknownSurface};
use relmap::EntityCatalog;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(raw) = parse_occurrences(text, "fuzz") {
        let mut catalog = EntityCatalog::new();
        let _ = resolve_occurrences(raw, &mut catalog, UnknownSurface::Create, "fuzz");
    }
});
