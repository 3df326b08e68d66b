pub mod cli;
pub mod crossed;
pub mod error;
pub mod homology;
pub mod intlinalg;
pub mod kgraph;
pub mod suite;
pub mod twist;

pub use error::{Error, Result};
