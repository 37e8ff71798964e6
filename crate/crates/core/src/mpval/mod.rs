//! Arbitrary-precision real arithmetic.

mod bigfloat;
pub mod constants;
pub mod elementary;
pub mod special;

use thiserror::Error;

pub use bigfloat::BigFloat;
pub use elementary::ElemFn;

/// Extra bits carried internally beyond the requested precision.
pub const GUARD_BITS: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MpError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("logarithm of a non-positive value")]
    NonPositive,
    #[error("division by zero")]
    DivisionByZero,
}

/// Bits needed for `digits` decimal digits.
pub fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32
}
