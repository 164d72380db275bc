#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use relmap::recognizer::{parse_first_names, Recognizer, RecognizerConfig, Side, TriggerCategory, TriggerPattern};
use relmap::{EntityId, Lang, VariantMap};

fn recognizer() -> &'static Recognizer {
    static R: OnceLock<Recognizer> = OnceLock::new();
    R.get_or_init(|| {
        let en = Lang::new("en").unwrap();
        let mut known = VariantMap::new();
        known.insert("Rafik Hariri", EntityId(1)).unwrap();
        known.insert("Kofi Annan", EntityId(2)).unwrap();
        Recognizer::new(RecognizerConfig {
            known_names: known,
            first_names: parse_first_names("John\nMaria\n"),
            triggers: vec![
                TriggerPattern::new("president", Side::Left, TriggerCategory::Title, en),
                TriggerPattern::new("Dr.", Side::Left, TriggerCategory::Title, en),
                TriggerPattern::new("(?:said|told)", Side::Right, TriggerCategory::RegexPattern, en),
            ],
            ..Default::default()
        })
        .unwrap()
    })
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for m in recognizer().recognize(text) {
        assert_eq!(&text[m.start..m.end], m.surface);
    }
});
