//! Exact counting and estimation engine for arithmetic statistics of integer
//! matrices in the box |a_ij| <= H: discriminant counters, diagonalisability
//! censuses, finite-field verifications, closed-form n=2 counters, a
//! lower-bound witness family, exponent bookkeeping with empirical slope
//! fits, and condition-number tail sampling.

pub mod asympt;
pub mod census;
pub mod cond;
pub mod error;
pub mod ffcount;
pub mod intmat;
pub mod intpoly;
pub mod quadstat;
pub mod selftest;
pub mod witness;

pub use error::{Error, Result};
pub use intmat::{IntMatrix, RatMatrix};
pub use intpoly::{FactorProfile, IntPoly};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
