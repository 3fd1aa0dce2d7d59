//! Arithmetic substrate: exact rationals plus certified dyadic-interval
//! values with adaptive precision refinement and decidable-sign contracts.

pub mod dyadic;
pub mod expr;
pub mod interval;
pub mod scalar;

pub use dyadic::{rational_to_decimal, Dyadic, Rounding};
pub use expr::Expr;
pub use interval::Interval;
pub use scalar::{
    certified_sign, scalar_sum, CertifiedScalar, NumericError, Scalar, DEFAULT_MAX_PRECISION_BITS,
    DEFAULT_PRECISION_BITS,
};
