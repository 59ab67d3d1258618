//! Exact computation of second-best Diophantine approximation functions of an
//! irrational `α`, their jump sequences, the associated spectral constants,
//! and convergent-membership criteria.

pub mod cf;
pub mod error;

pub use error::{Error, Result};
pub mod psi;
pub mod rules;
pub mod spectra;
pub mod legendre;
pub mod verify;
pub mod cli;
