#![no_main]

use libfuzzer_sys::fuzz_target;
use pfq::fpgroups::Word;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let ngens = if data.is_empty() { 1 } else { (data[0] as usize % 26) + 1 };
    if let Ok(w) = Word::parse_letters(text, ngens) {
        let back = Word::parse_letters(&w.to_letters(), ngens).expect("roundtrip");
        assert_eq!(w.letters(), back.letters());
        let r = w.free_reduce();
        assert_eq!(r.letters(), r.free_reduce().letters(), "reduction idempotent");
        assert!(r.len() <= w.len());
    }
});
