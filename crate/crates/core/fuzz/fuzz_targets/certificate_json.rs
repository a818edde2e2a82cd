#![no_main]

use libfuzzer_sys::fuzz_target;
use osg_core::certifier::verify_certificate_json;

fuzz_target!(|data: &[u8]| {
    if let Ok(src) = std::str::from_utf8(data) {
        let _ = verify_certificate_json(src);
    }
});
