//! File formats: network files, manifests, node metadata, run configuration,
//! draw archives and report outputs.

pub mod archive;
pub mod config;
pub mod dataset;
pub mod report;

pub use archive::write_atomic;
