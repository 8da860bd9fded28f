//! Generalized weights of linear, Gabidulin and Delsarte codes.
//!
//! The crate computes generalized Hamming weights, generalized rank weights
//! and Delsarte generalized weights, classifies optimal anticodes in the three
//! metrics, and implements the trace-product duality theory for matrix codes.
//! Every fast path has an independent brute-force counterpart in [`oracle`].

pub mod cli;
pub mod config;
pub mod delsarte;
pub mod error;
pub mod field;
pub mod hamming;
pub mod linalg;
pub mod oracle;
pub mod profile;
pub mod rankmetric;

pub use config::GuardConfig;
pub use error::{Error, Result};
pub use profile::{Metric, WeightProfile};
