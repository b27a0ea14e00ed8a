//! High-precision machinery for the Mahler-measure / L-value identities of the
//! Laurent family `P_{a,b,c}(x,y) = a(x+1/x) + b(y+1/y) + c` and the conductor-21
//! newform `f_21`.
//!
//! The crate is organized around independent computation routes for the same
//! quantities (quadrature vs AGM, q-series vs numeric products, point counting
//! vs measure integrals) so that every identity can be checked from two sides.

pub mod curve;
pub mod elliptic;
pub mod error;
pub mod lseries;
pub mod mahler;
pub mod precision;
pub mod qseries;
pub mod quad;

pub use error::Error;
pub use precision::PrecisionContext;

/// Arbitrary-precision real number (MPFR-backed).
pub type Real = rug::Float;
/// Arbitrary-precision complex number (MPC-backed).
pub type Complex = rug::Complex;

pub type Result<T> = std::result::Result<T, Error>;
