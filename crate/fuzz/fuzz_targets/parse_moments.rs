#![no_main]

use libfuzzer_sys::fuzz_target;
use ptseries::io::{parse_moments, MAX_MOMENT};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(ms) = parse_moments(text) {
        assert!(!ms.is_empty());
        assert!(ms.iter().all(|&m| m <= MAX_MOMENT));
        let mut sorted = ms.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), ms.len());
    }
});
