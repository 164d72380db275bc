#![no_main]

use libfuzzer_sys::fuzz_target;
use relmap::baseline::{extract_hyperlinks, href_title};

fuzz_target!(|data: &[u8]| {
    let html = String::from_utf8_lossy(data);
    for link in extract_hyperlinks(&html) {
        let _ = href_title(&link.target);
    }
});
