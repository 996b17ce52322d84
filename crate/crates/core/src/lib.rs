pub mod acceptance;
pub mod boundary_energy;
pub mod bulk_energy;
pub mod cli;
pub mod error;
pub mod heat_kernel;
pub mod laurent;
pub mod quadrature;
pub mod special_fn;

pub use error::{Error, Result};

/// A computed value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}
