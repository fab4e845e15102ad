//! Moment matching model reduction for port-Hamiltonian systems.

pub mod error;
pub mod linalg;

pub use error::{Error, Result};
pub mod systems;
pub mod moments;
pub mod reduction;
pub mod verification;
pub mod simulation;
pub mod document;
