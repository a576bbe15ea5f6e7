//! Classification of symplectic torus bundles over surfaces by exact
//! computation of second cohomology with local coefficients.

pub mod error;
pub mod classification;
pub mod cli;
pub mod cohomology;
pub mod exact;
pub mod heisenberg;
pub mod huebschmann;
pub mod sampling;
pub mod selftest;
pub mod surfaces;

pub use error::{Error, Result};
