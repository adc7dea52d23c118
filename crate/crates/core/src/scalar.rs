use ndarray::{LinalgScalar, ScalarOperand};
use num_traits::{Float, FromPrimitive, NumAssign};

/// Floating-point scalar the whole crate is generic over.
///
/// The bound set is the union of what the dense kernels need: IEEE float
/// operations ([`Float`]), compound assignment, conversion from literals, and
/// the ndarray operand traits for matrix products and scalar broadcasting.
/// Implemented for `f32` and `f64`.
pub trait Scalar:
    Float
    + NumAssign
    + FromPrimitive
    + LinalgScalar
    + ScalarOperand
    + std::fmt::Debug
    + std::fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant into this scalar type.
    ///
    /// Panics if the value is not representable, which cannot happen for the
    /// finite literals used in this crate.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("literal not representable in scalar type")
    }

    /// Converts a count into this scalar type (for averages and scalings).
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count not representable in scalar type")
    }

    /// Lossy view of this scalar as `f64`, used for diagnostics and reports.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
