#![no_main]

use libfuzzer_sys::fuzz_target;
use ptseries::io::parse_region;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = parse_region(text) {
        assert!(r.x0 < r.x1 && r.y0 < r.y1);
        assert!(r.x0.is_finite() && r.x1.is_finite() && r.y0.is_finite() && r.y1.is_finite());
    }
});
