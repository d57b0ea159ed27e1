#![no_main]

use geodeduce::exactmath::{AlgebraicNumber, SurdRecord};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(rec) = serde_json::from_slice::<SurdRecord>(data) else {
        return;
    };
    if let Ok(a) = AlgebraicNumber::from_record(&rec) {
        assert_eq!(
            AlgebraicNumber::from_record(&a.record()).expect("record round trip"),
            a
        );
    }
});
