//! Minimal resolutions over the mod 2 Steenrod algebra, Adams E2 charts of
//! stunted projective spectra, and an algebraic Mahowald invariant driver.

pub mod charts;
pub mod error;
pub mod f2linalg;
pub mod gradedmod;
pub mod lambda;
pub mod mahowald;
pub mod resolution;
pub mod selftest;
pub mod steenrod;

pub use error::{Error, Result};
