//! Exact decision procedure for boundedness of a meromorphic quotient `f/g`
//! near the origin on the product of upper half-planes, with a floating-point
//! sampling oracle for cross-validation.

pub mod arith;
pub mod admissibility;
pub mod blowup;
pub mod error;
pub mod fixtures;
pub mod frontend;
pub mod ideal;
pub mod oracle;
pub mod puiseux;

pub use error::{Error, Result};
