pub mod error;
pub mod gallery;
pub mod io;
pub mod krylov;
pub mod linalg;
pub mod logm;
pub mod matrix;
pub mod quadrature;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, C64};

/// Unit round-off of IEEE double precision, 2^-53.
pub const UNIT_ROUNDOFF: f64 = 1.1102230246251565e-16;
