#![no_main]

use libfuzzer_sys::fuzz_target;
use ptseries::series::CoefficientTable;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(table) = CoefficientTable::from_text(text) {
        // anything accepted satisfies the recursions and re-serialises losslessly
        assert!(table.verify().is_ok());
        assert_eq!(CoefficientTable::from_text(&table.to_text()).unwrap(), table);
    }
});
