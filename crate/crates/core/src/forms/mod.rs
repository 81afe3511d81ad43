//! ε-hermitian forms: Gram matrices, structural operations, diagonalization
//! and trace transfers.

mod diag;
mod form;
mod ops;
mod transfer;

pub use diag::{diagonalize, verify_witness, DiagForm, Diagonalization};
pub(crate) use diag::{diagonalize_dense, flat_diagonal};
pub use form::{HermForm, ProductForm, QuadForm};
pub use ops::{extend_scalars, morita_flatten, multiple, orth_sum, orth_sum_all, scale_unit, tensor_quadratic, to_canonical};
pub(crate) use transfer::transfer_any;
pub use transfer::{pfister, trace_transfer, transfer_to_base};
