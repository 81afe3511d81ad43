//! Decidable Witt-class questions over base ℚ.

mod decide;
mod plg;
mod quad;
mod split;

pub use decide::{is_hyperbolic, is_hyperbolic_product, witt_equal, witt_equal_product, Certificate, Verdict, WittDecision};
pub use plg::{plg_minimal_n, PlgOutcome, DEFAULT_N_MAX};
pub use quad::{diagonal_invariants, hyperbolic_invariants, is_isotropic_diagonal, quad_invariants, QuadInvariants};
