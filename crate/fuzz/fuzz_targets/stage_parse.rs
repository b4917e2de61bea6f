#![no_main]

use libfuzzer_sys::fuzz_target;
use pfq::engine::Stage;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(stage) = Stage::parse(text) {
        let again = Stage::parse(&stage.name()).expect("roundtrip");
        assert_eq!(stage.name(), again.name());
    }
});
