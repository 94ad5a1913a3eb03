pub mod error;
pub mod matrix;
pub mod poly;
pub mod precision;
pub mod quadrature;
pub mod scalar;

pub use error::{Error, Result};
pub use precision::PrecisionContext;
pub mod cli;
pub mod defects;
pub mod dim3;
pub mod kostant;
pub mod modeldet;
pub mod repdata;
pub mod rtorsion;
