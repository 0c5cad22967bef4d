pub mod bridge;
pub mod crossing;
pub mod error;
pub mod graph;
pub mod hexlattice;
pub mod lattice;
pub mod pipeline;
pub mod quantum;
pub mod stats;
pub mod width;
pub mod work;

pub use error::{Error, Result};
