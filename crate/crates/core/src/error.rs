use thiserror::Error;

/// Errors raised by the library. Every variant corresponds to a documented
/// failure of one of the public operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid place: {0}")]
    InvalidPlace(String),
    #[error("invalid scalar: {0}")]
    InvalidScalar(String),
    #[error("element is not invertible: {0}")]
    SingularUnit(String),
    #[error("not an involution: {0}")]
    NotAnInvolution(String),
    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),
    #[error("center splits, Witt groups are trivial: {0}")]
    SplitCenter(String),
    #[error("gram matrix is not epsilon-hermitian: {0}")]
    NotHermitian(String),
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("singular form: {0}")]
    SingularForm(String),
    #[error("involution is not canonical, scale first")]
    ScaleFirst,
    #[error("skew-hermitian input, use the skew path")]
    UseSkewPath,
    #[error("form is alternating and has no diagonalization")]
    NotDiagonalizable,
    #[error("ordering is nil for this algebra")]
    NilOrdering,
    #[error("ordering is not nil for this algebra")]
    NotNil,
    #[error("element does not have maximal signature: {0}")]
    NotMaximal(String),
    #[error("invalid entry: {0}")]
    InvalidEntry(String),
    #[error("ordering {0} does not belong to this algebra component")]
    OrderingMismatch(String),
    #[error("unsupported base ring: {0}")]
    UnsupportedBase(String),
    #[error("search budget of {0} candidates exhausted")]
    SearchBudgetExceeded(usize),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
