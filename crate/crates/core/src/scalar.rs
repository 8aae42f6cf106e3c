//! Scalar abstraction for the floating-point side of the crate.
//!
//! Real-matrix geometry, spherical-function estimates and spectral profiles
//! are generic over [`Real`]; the exact side (matrix groups, lattice counts,
//! tree combinatorics) stays in integers. `f64` is the working default, see
//! the aliases at the crate root.

use num_traits::{Float, FromPrimitive, NumAssign};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FromPrimitive
    + NumAssign
    + std::iter::Sum
    + std::fmt::Debug
    + std::fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`; total for the provided impls.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 conversion")
    }
    fn of_usize(x: usize) -> Self {
        Self::from_usize(x).expect("usize conversion")
    }
}

impl Real for f32 {}
impl Real for f64 {}
