pub mod charpoints;
pub mod coxeter;
pub mod error;
pub mod hecke;
pub mod k0model;
pub mod klalgebra;
pub mod report;
pub mod rings;
pub mod suites;

pub use error::{Error, Result};
pub use rings::{BivarPoly, LaurentPoly, LocalizedScalar, RatFunc};
