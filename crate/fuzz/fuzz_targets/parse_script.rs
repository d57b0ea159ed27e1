#![no_main]

use geodeduce::dsl::{parse_script, unparse};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(s) = parse_script(src) {
        let again = parse_script(&unparse(&s)).expect("canonical text reparses");
        assert_eq!(again.program, s.program);
        assert_eq!(again.queries, s.queries);
    }
});
