//! Oblivious sketches for k-sparse regression: sketch constructors, sketch-space
//! loss estimators, exact and sketched solvers, and instance generators.

pub mod error;
pub mod estimators;
pub mod instances;
pub mod losses;
pub mod numerics;
pub mod sketches;
pub mod solvers;
pub mod sparse;

pub use error::{Error, Result};
pub use sparse::SparseVector;
