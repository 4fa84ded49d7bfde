//! Replays the checked-in fuzz seeds through the same checks as the fuzz
//! targets, so the seeds stay valid as the formats evolve.

use std::path::{Path, PathBuf};

use netmix::io::archive::{decode_archive, encode_archive};
use netmix::io::config::parse_config;
use netmix::io::dataset::{
    parse_adjacency_csv, parse_edge_list, parse_manifest, parse_node_metadata, write_adjacency_csv,
    write_manifest,
};
use netmix::network::EdgeIndexMap;

fn seeds(target: &str) -> Vec<(PathBuf, Vec<u8>)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(PathBuf, Vec<u8>)> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| {
            let path = e.unwrap().path();
            let bytes = std::fs::read(&path).unwrap();
            (path, bytes)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

fn text(bytes: &[u8]) -> &str {
    std::str::from_utf8(bytes).unwrap()
}

#[test]
fn adjacency_seeds_round_trip() {
    for (path, bytes) in seeds("adjacency_csv") {
        let edges = parse_adjacency_csv(text(&bytes)).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let map = EdgeIndexMap::from_edge_count(edges.len()).unwrap();
        assert_eq!(parse_adjacency_csv(&write_adjacency_csv(&edges, &map).unwrap()).unwrap(), edges);
    }
}

#[test]
fn edge_list_seeds_parse() {
    for (path, bytes) in seeds("edge_list") {
        parse_edge_list(text(&bytes)).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}

#[test]
fn manifest_seeds_round_trip() {
    for (path, bytes) in seeds("manifest") {
        let manifest = parse_manifest(text(&bytes)).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(parse_manifest(&write_manifest(&manifest).unwrap()).unwrap(), manifest);
    }
}

#[test]
fn node_metadata_seeds_parse() {
    for (path, bytes) in seeds("node_metadata") {
        parse_node_metadata(text(&bytes)).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}

#[test]
fn config_seeds_parse() {
    for (path, bytes) in seeds("config") {
        parse_config(text(&bytes)).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}

#[test]
fn archive_seeds_reencode_identically() {
    let mut valid = 0;
    for (path, bytes) in seeds("draw_archive") {
        match decode_archive(&bytes) {
            Ok(draws) => {
                assert_eq!(encode_archive(&draws).unwrap(), bytes, "{}", path.display());
                valid += 1;
            }
            Err(_) => assert!(path.to_string_lossy().contains("truncated")),
        }
    }
    assert!(valid >= 2);
}
