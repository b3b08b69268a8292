//! Casimir pressures, forces and free energies of a massless Dirichlet scalar
//! field in the optical (classical ray) approximation.
//!
//! Units are natural (ħ = c = k_B = 1); lengths are in an arbitrary unit and
//! pressures come out in units of ħc/length⁴.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod numerics;
pub mod oracle;
pub mod paths;
pub mod pressure;
pub mod thermal;

pub use error::{Error, Result};
pub use geometry::{Scene, SurfacePoint};
pub use paths::{PathFamily, PathKernel};
pub use pressure::{ForceReport, CutoffParams};
pub use thermal::{FreeEnergyBreakdown, ThermalParams};
