#![no_main]

use libfuzzer_sys::fuzz_target;
use osg_core::deformation::DeformationSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = DeformationSpec::from_json(src) {
        let again = DeformationSpec::from_json(&spec.to_json().unwrap()).expect("round trip");
        assert_eq!(again, spec);
    }
});
