//! Multiprecision arithmetic: precision contexts, real numbers, exact
//! rational parameters, automatic differentiation and special functions.

mod context;
mod dual;
mod exact;
pub mod quad;
mod real;
mod scalar;
pub mod special;

pub use context::PrecisionContext;
pub use dual::Dual2;
pub use exact::Exact;
pub use real::Real;
pub use scalar::Scalar;
