#![no_main]

use libfuzzer_sys::fuzz_target;
use osg_core::ring::MultiplicationTable;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(t) = MultiplicationTable::from_json(src, false) {
        let again = t.to_json().expect("loaded table serializes");
        assert!(MultiplicationTable::from_json(&again, false).is_ok());
    }
});
