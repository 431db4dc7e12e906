//! Exact and simulated random access coverage depth for linear codes.
//!
//! Columns of a `k × n` generator matrix over GF(q) are drawn uniformly with
//! replacement. For each information symbol `i` the library computes the
//! expected number of draws until `e_i` lies in the span of the drawn
//! columns, either exactly (three independent engines and a family of closed
//! forms) or by seeded Monte Carlo simulation.

pub mod closedform;
pub mod codes;
pub mod error;
pub mod exact;
pub mod exec;
pub mod field;
pub mod format;
pub mod linalg;
pub mod matrix;
pub mod montecarlo;
pub mod search;

pub use error::{Error, Result};
pub use exact::{Engine, ExpectationReport, Options, Target};
pub use field::{FieldElem, FieldSpec};
pub use matrix::{ColumnSet, GenMatrix};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
