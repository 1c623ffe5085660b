//! Long-wave models for surface waves on a constant-vorticity shear flow.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod characteristics;
pub mod dispersion;
pub mod error;
pub mod export;
pub mod numerics;
pub mod params;
pub mod spectral;
pub mod stability;
pub mod traveling;

pub use error::{Error, Result};
pub use params::{Branch, PhysicalParams};
