#![no_main]

use libfuzzer_sys::fuzz_target;
use pfq::invariants::{InvariantDescriptor, InvariantRecord};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(rec) = serde_json::from_str::<InvariantRecord>(text) {
        // the engine parses the descriptor of every cached record
        let _ = InvariantDescriptor::parse(&rec.descriptor);
        let line = serde_json::to_string(&rec).unwrap();
        let again: InvariantRecord = serde_json::from_str(&line).unwrap();
        assert_eq!(rec, again);
    }
});
