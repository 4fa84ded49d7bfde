#![no_main]

use libfuzzer_sys::fuzz_target;
use netmix::io::dataset::{parse_manifest, write_manifest};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(manifest) = parse_manifest(text) {
        let again = parse_manifest(&write_manifest(&manifest).unwrap()).unwrap();
        assert_eq!(again, manifest);
    }
});
