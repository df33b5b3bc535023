//! Exact Wold-type decompositions for permutative row-isometries and for
//! θ-commuting pairs of them, with a truncated sparse-matrix oracle that
//! checks every claim independently.

pub mod cli;
pub mod error;
pub mod exec;
pub mod lebesgue;
pub mod oracle;
pub mod pair;
pub mod presentation;
pub mod slocinski;
pub mod space;
pub mod wold;
pub mod words;

pub use error::{Error, Result};
