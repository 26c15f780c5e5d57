//! Open-quantum-system models, displaced-jump ("beta-dyne") unravelings,
//! and exceptional points of the resulting no-jump effective Hamiltonians.
//!
//! Qubit operators use the basis order `(|e>, |g>)`; see [`linalg::standard`].

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod model;
pub mod scenarios;
pub mod spectral;
pub mod tol;
pub mod validate;

pub use error::{Error, Result};
