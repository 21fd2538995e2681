//! Command-line front end for `padiq`.

pub mod app;
pub mod fixtures;

pub use app::run;
