//! Channel models, rate metrics, problem formulations and solvers for
//! next-generation multiple access resource allocation.

pub mod error;
pub mod channels;
pub mod metrics;
pub mod problems;
pub mod numerics;
pub mod solvers;
pub mod bench;

pub use error::{Error, Result};
