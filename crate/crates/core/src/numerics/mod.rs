//! Numerical building blocks shared by the physics modules.

pub mod ode;
pub mod quad;
pub mod roots;
pub mod special;
pub mod sum;

pub use quad::{integrate, integrate_to_infinity, QuadOptions, QuadResult};
pub use sum::{compensated_sum, CompensatedSum};
