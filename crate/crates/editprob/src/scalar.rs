//! Scalar abstraction for the probability kernels.
//!
//! Everything numeric in this crate is generic over [`Scalar`] so the same
//! code runs in `f64` (the default everywhere accuracy matters) and `f32`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::Float;

/// Floating-point scalar the edit-probability kernels operate on.
pub trait Scalar: Float + Sum + Debug + Display + Send + Sync + 'static {
    /// Shorthand for converting small literal constants.
    fn of(v: f64) -> Self {
        Self::from(v).expect("constant representable in scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
