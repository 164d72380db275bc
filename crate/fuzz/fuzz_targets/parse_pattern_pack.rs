#![no_main]

use libfuzzer_sys::fuzz_target;
use relmap::recognizer::{parse_pattern_pack, Recognizer, RecognizerConfig};
use relmap::Lang;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(triggers) = parse_pattern_pack(text, Lang::new("en").unwrap(), "fuzz") else { return };
    // Building may reject a bad regex but must not panic.
    if let Ok(r) = Recognizer::new(RecognizerConfig { triggers, ..Default::default() }) {
        let _ = r.recognize("The former minister John Smith said on Monday.");
    }
});
