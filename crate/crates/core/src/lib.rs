//! Dependent mixtures of low-rank factorizations for populations of binary
//! undirected networks: the generative model, a Polya-Gamma Gibbs sampler,
//! global and per-edge group-difference tests, and network-based classification.

pub mod error;
pub mod io;
pub mod model;
pub mod network;
pub mod numeric;
pub mod oracle;
pub mod polya_gamma;
pub mod priors;
pub mod sampler;
pub mod testing;

pub use error::{Error, Result};
