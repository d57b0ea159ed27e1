#![no_main]

use geodeduce::dsl::corpus::{Corpus, BUNDLED_SCRIPTS};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = Corpus::from_sources(text, &BUNDLED_SCRIPTS);
});
