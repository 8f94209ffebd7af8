#![no_main]

use libfuzzer_sys::fuzz_target;
use motzgen::RatioTable;

fuzz_target!(|data: &[u8]| {
    if let Ok(table) = RatioTable::parse(data) {
        let mut out = Vec::new();
        table.write_to(&mut out).unwrap();
        let again = RatioTable::parse(&out).unwrap();
        assert_eq!(again.max_n(), table.max_n());
        assert!(again
            .entries()
            .zip(table.entries())
            .all(|(a, b)| a.0 == b.0 && a.1.to_bits() == b.1.to_bits()));
    }
});
