#![no_main]

use libfuzzer_sys::fuzz_target;
use osg_core::algebra::{format_rational, parse_rational};

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(r) = parse_rational(src) {
        assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }
});
