pub mod arith;
pub mod error;
pub mod grading;
pub mod invariants;
pub mod pl;
pub mod polyhedra;

pub use error::{Error, Result};
