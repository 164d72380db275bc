#![no_main]

use libfuzzer_sys::fuzz_target;
use relmap::Snapshot;

fuzz_target!(|data: &[u8]| {
    if let Ok(snap) = Snapshot::decode(data) {
        assert_eq!(Snapshot::decode(&snap.encode()).expect("re-decode"), snap);
    }
});
