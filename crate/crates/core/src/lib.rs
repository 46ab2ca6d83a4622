//! Numerical toolkit for pairs of orthogonal projections.
//!
//! * [`substrate`]: dense complex matrices, subspaces and tolerances.
//! * [`pairs`]: five-space decomposition, principal angles, index and spectral relations.
//! * [`geodesics`]: Grassmann geodesics, the co-diagonal logarithm and restricted indices.
//! * [`complement`]: common-complement certificates and truncation-family classification.
//! * [`hardy`]: symbols, Toeplitz and Hankel truncations and the catalogue of Hardy-space examples.

pub mod complement;
pub mod error;
pub mod geodesics;
pub mod hardy;
pub mod pairs;
pub mod random;
pub mod report;
pub mod substrate;

pub use error::{Error, Result};
