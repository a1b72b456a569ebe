//! Exact best-coapproximation and Birkhoff–James orthogonality in
//! finite-dimensional polyhedral normed spaces.

pub mod coapprox;
pub mod error;
pub mod fixtures;
pub mod l1;
pub mod linalg;
pub mod linf;
pub mod polytope;
pub mod space;
pub mod subspace;

pub use error::{Error, Result};
