pub mod board;
pub mod error;
pub mod format;
pub mod geometry;
pub mod instances;
pub mod oracle;
pub mod solvers;

pub use error::{Error, Result};
