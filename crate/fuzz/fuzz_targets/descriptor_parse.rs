#![no_main]

use libfuzzer_sys::fuzz_target;
use pfq::invariants::InvariantDescriptor;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(d) = InvariantDescriptor::parse(text) {
        let s = d.to_string_form();
        let again = InvariantDescriptor::parse(&s).expect("roundtrip");
        assert_eq!(d, again);
    }
});
