pub mod analysis;
pub mod chebyshev;
pub mod cli;
pub mod corpus;
pub mod differences;
pub mod error;
pub mod field;
pub mod moduli;
pub mod quadrature;
pub mod tails;

pub use error::{Error, Result};
