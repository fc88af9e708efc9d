#![no_main]

use libfuzzer_sys::fuzz_target;
use ptseries::precision::parse_real_bits;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = parse_real_bits(text, 128) {
        assert!(x.is_finite());
    }
});
