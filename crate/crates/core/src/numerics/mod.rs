//! Scalar numerical utilities shared by every module.

pub mod diff;
pub mod jet;
pub mod quad;
pub mod roots;
pub mod special;
pub mod sum;

pub use diff::{second_derivative_even, second_derivative_one_sided, Derivative};
pub use jet::Jet2;
pub use quad::{integrate, try_integrate, try_integrate_with_breaks, QuadOptions, Quadrature};
pub use roots::{brent_minimize, brent_root};
pub use sum::{compensated_sum, NeumaierSum};
