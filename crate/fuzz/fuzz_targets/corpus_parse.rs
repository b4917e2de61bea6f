#![no_main]

use libfuzzer_sys::fuzz_target;
use pfq::fpgroups::{parse_corpus, serialize_corpus};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(corpus) = parse_corpus(text) {
        // serialization must be a fixed point of parse . serialize
        let canon = serialize_corpus(&corpus);
        let again = parse_corpus(&canon).expect("serialized corpus must reparse");
        assert_eq!(canon, serialize_corpus(&again));
    }
});
