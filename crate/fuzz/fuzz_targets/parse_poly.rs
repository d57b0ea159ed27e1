#![no_main]

use geodeduce::exactmath::text::parse_poly;
use geodeduce::exactmath::MonomialOrder;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    let names = ["x", "y"];
    if let Ok(p) = parse_poly(src, &names) {
        // Printed text must parse back to the same polynomial.
        let text = p.to_text(&["x".into(), "y".into()], &MonomialOrder::grevlex(2));
        assert_eq!(parse_poly(&text, &names).expect("printed polynomial reparses"), p);
    }
});
