#![no_main]

use libfuzzer_sys::fuzz_target;
use pfq::zlinalg::AbelianInvariants;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(a) = AbelianInvariants::parse(text) {
        let s = a.canonical_string();
        let again = AbelianInvariants::parse(&s).expect("roundtrip");
        assert_eq!(s, again.canonical_string());
    }
});
