#![no_main]

use libfuzzer_sys::fuzz_target;
use netmix::io::archive::{decode_archive, encode_archive};

fuzz_target!(|data: &[u8]| {
    if let Ok(draws) = decode_archive(data) {
        // A valid archive re-encodes to the same bytes.
        assert_eq!(encode_archive(&draws).unwrap(), data);
    }
});
