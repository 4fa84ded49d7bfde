#![no_main]

use libfuzzer_sys::fuzz_target;
use netmix::io::dataset::parse_node_metadata;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_node_metadata(text);
    }
});
