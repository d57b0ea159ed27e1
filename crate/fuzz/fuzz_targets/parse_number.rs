#![no_main]

use geodeduce::dsl::parse_number;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(a) = parse_number(src) {
        assert_eq!(parse_number(&a.to_string()).expect("printed number reparses"), a);
    }
});
