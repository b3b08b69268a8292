//! Reflection families, closed-path lengths, enlargement factors and kernels.

pub mod family;
pub mod kernel;
pub mod pencil;

pub use family::{path_families, plate_even_families, FamilyKind, PathFamily, SphereFamily};
pub use kernel::{
    enlargement_half, enlargement_half_wavefront, path_length, second_normal_derivative, PathKernel, Weight,
};
pub use pencil::{pencil_delta, trace, wavefront_delta, WavefrontStep, PENCIL_DELTA};
