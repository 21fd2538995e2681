//! Exact p-adic linear symplectic geometry.

pub mod analytic;
pub mod digit_squeeze;
pub mod ellipsoid;
pub mod equivariant;
pub mod error;
pub mod linalg;
pub mod literal;
pub mod padic;
pub mod polar;
pub mod render;
pub mod shape;
pub mod squeeze;

pub use error::{Error, Result};
pub use padic::{PadicContext, PadicNumber};
