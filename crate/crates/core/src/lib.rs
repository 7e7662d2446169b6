pub mod automorphism;
pub mod cli;
pub mod complexity;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod neutral;
pub mod numeric;

pub use error::{Error, Result};
pub use graph::{Link, Network};
