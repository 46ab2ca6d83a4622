//! Hardy-space symbols, truncated operators and the catalogue of examples.

mod examples;
mod operators;
mod symbol;

pub use examples::*;
pub use operators::*;
pub use symbol::*;
