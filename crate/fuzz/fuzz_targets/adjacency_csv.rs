#![no_main]

use libfuzzer_sys::fuzz_target;
use netmix::io::dataset::{parse_adjacency_csv, write_adjacency_csv};
use netmix::network::EdgeIndexMap;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(edges) = parse_adjacency_csv(text) {
        // Whatever parses must survive a write and re-read unchanged.
        let map = EdgeIndexMap::from_edge_count(edges.len()).unwrap();
        let again = parse_adjacency_csv(&write_adjacency_csv(&edges, &map).unwrap()).unwrap();
        assert_eq!(again, edges);
    }
});
