//! Exact combinatorics of the Penrose tree-partition scheme and the virial
//! expansion of hard-core lattice gases.

pub mod bounds;
pub mod cli;
pub mod coefficients;
pub mod error;
pub mod graph;
pub mod models;
pub mod penrose;
pub mod series;
pub mod splitting;

pub use error::{Error, Result};
