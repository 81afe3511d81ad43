//! Exact signatures, trace pairings and Witt-class deciders for ε-hermitian
//! forms over algebras with involution.

pub mod algebra;
pub mod arith;
pub mod error;
pub mod forms;
pub mod json;
pub mod linalg;
pub mod pairing;
pub mod random;
pub mod signature;
pub mod suites;
pub mod witt;

pub use error::{Error, Result};
