//! Numerical machinery for one-dimensional log-gas ensembles.
//!
//! The crate implements, in closed form wherever one exists, the objects
//! used to study beta-ensembles at the microscopic scale: point
//! configurations and their gap enumerations, intrinsic energies against a
//! uniform background, the planar electric field of a configuration with
//! its truncation near charges, a screening construction that repairs a
//! configuration near window edges, displacement interpolation between
//! labeled tuples with a quantitative convexity certificate, and the
//! statistical estimators (discrepancy variance, gap distances, gain
//! functionals) that separate distinct point processes.
//!
//! Everything here is `no_std`-compatible (with `alloc`); IO, file
//! formats, and the command-line front end live in the companion `loggas`
//! crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod constants;
pub mod energy;
pub mod error;
pub mod field;
mod fmath;
pub mod pointconf;
pub mod quad;
pub mod sampler;
pub mod screening;
pub mod stats;
pub mod summation;
pub mod transport;
pub mod tridiag;

pub use error::{Error, Result};
