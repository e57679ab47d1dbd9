use thiserror::Error;

/// Errors reported by the solvers and their building blocks.
///
/// Input problems (`WrongCount`, `ZeroValue`, `NotPrime`, ...) are the
/// caller's fault. `Invariant` means the algorithm itself misbehaved and is
/// never expected in practice.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("gcd(0, 0) is undefined")]
    ZeroGcd,

    #[error("value {value} at position {index} is outside [0, {bound})")]
    OutOfRange {
        index: usize,
        value: u64,
        bound: u64,
    },

    #[error("expected {expected} values, got {got}")]
    WrongCount { expected: usize, got: usize },

    #[error("value at position {index} is zero modulo {modulus}")]
    ZeroValue { index: usize, modulus: u64 },

    #[error("target {target} is outside the representable window [{lo}, {hi}]")]
    OutsideWindow { target: i64, lo: i64, hi: i64 },

    #[error("cannot drop difference {index} to {requested}: current length is {current}")]
    DropOutOfRange {
        index: usize,
        requested: i64,
        current: i64,
    },

    #[error("the covered set already contains every residue")]
    SetFull,

    #[error("difference must be nonzero")]
    ZeroDifference,

    #[error("instance too large for brute force: {0}")]
    ScaleGuard(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True when the error stems from an internal inconsistency rather than
    /// from bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
