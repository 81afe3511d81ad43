//! Exact scalar arithmetic: rationals, the quadratic tower and local symbols.

mod rational;
mod scalar;
pub mod symbols;

pub use rational::{format_rational, is_rational_square, parse_rational, rational_sign, rq, Rational};
pub use scalar::{Scalar, Tower};
pub use symbols::{hilbert_symbol, legendre_symbol, square_class, Place};
