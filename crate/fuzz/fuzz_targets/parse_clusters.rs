#![no_main]

use libfuzzer_sys::fuzz_target;
use relmap::store::{parse_clusters, write_clusters};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(clusters) = parse_clusters(text, "fuzz") {
        let again = parse_clusters(&write_clusters(&clusters), "again").expect("reparse");
        assert_eq!(again, clusters);
    }
});
