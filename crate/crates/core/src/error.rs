use thiserror::Error;

/// Errors raised across the library.
///
/// The CLI maps these onto process exit codes, so the variants are grouped
/// by what went wrong rather than by module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("value is not a power of the given base")]
    NotInSubgroup,

    #[error("character evaluated at zero")]
    ZeroArgument,

    #[error("unsupported conductor {0}: only tamely ramified characters are handled")]
    UnsupportedConductor(u32),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("objects live over different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),

    #[error("monodromy entry N[{row}][{col}] is incompatible with the summand characters")]
    IncompatibleMonodromy { row: usize, col: usize },

    #[error("monodromy operator is not nilpotent")]
    NotNilpotent,

    #[error("value depends on a formal unramified unit: {0}")]
    FormalValue(String),

    #[error("numerically unstable: {0}")]
    NumericInstability(String),

    #[error("matrix is not in SL2(F_{0})")]
    NotInGroup(u64),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("pairing evaluation hit divisor support collisions {0} times in a row")]
    RetryExhausted(u32),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
