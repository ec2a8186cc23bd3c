//! Equidimensional decomposition data for sparse polynomial systems.
//!
//! Exact combinatorics (mixed volumes, special sets, generic degrees,
//! degree bounds), exact univariate resolutions, and a floating-point
//! polyhedral homotopy used to produce witness points per dimension.

pub mod combinatorics;
pub mod error;
pub mod homotopy;
pub mod intmat;
pub mod lattice;
pub mod lp;
pub mod oracle;
pub mod pipeline;
pub mod resolution;
pub mod subdivision;
pub mod unipoly;

pub use error::{Error, Result};
