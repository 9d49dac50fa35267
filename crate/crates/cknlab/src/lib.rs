//! Numerical verification laboratory for weighted L^p Hardy and
//! Caffarelli-Kohn-Nirenberg (CKN) identities and inequalities.
//!
//! The crate evaluates both sides of a catalog of exact identities to
//! quadrature precision, derives and solves p-Bessel pairs, confirms sharp
//! constants and extremizers, and estimates stability constants empirically
//! by optimizing deficit/distance ratios.

pub mod bessel;
pub mod cli;
pub mod domain;
pub mod error;
pub mod identities;
pub mod par;
pub mod quad;
pub mod remainder;
pub mod stability;
pub mod suite;

pub use error::CknError;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, CknError>;
