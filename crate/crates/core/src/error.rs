use thiserror::Error;

use crate::perm::Permutation;

/// Errors raised by the permutation, class and analysis layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at token `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("permutation length {0} exceeds the supported maximum of {max}", max = crate::perm::MAX_LEN)]
    TooLong(usize),

    #[error("slot ({pos_slot}, {val_slot}) is out of range for a permutation of length {len}")]
    SlotOutOfRange {
        pos_slot: usize,
        val_slot: usize,
        len: usize,
    },

    #[error(
        "inflation arity mismatch: skeleton has {expected} points but {found} parts were given"
    )]
    ArityMismatch { expected: usize, found: usize },

    #[error("maximal intervals not well-defined: {0} is decomposable")]
    Decomposable(Permutation),

    #[error("positions {pos_lo}..={pos_hi} do not form an interval of {perm}")]
    NotAnInterval {
        perm: Permutation,
        pos_lo: usize,
        pos_hi: usize,
    },

    #[error("a permutation class needs a non-empty basis")]
    EmptyBasis,

    #[error("{perm} is not a member of {class}")]
    NotAMember { perm: Permutation, class: String },

    #[error("{0} is simple; there is no interval to break")]
    AlreadySimple(Permutation),

    #[error("{0} is not of the form 1 ⊕ ρ with ρ sum-indecomposable and length at least 4")]
    NotOnePlusRho(Permutation),

    #[error("the indecomposable embedding does not exist for the class Av({0})")]
    ExcludedPattern(Permutation),

    #[error("bound {bound} is smaller than the length {len} of the starting permutation")]
    BoundTooSmall { bound: usize, len: usize },

    #[error("parallel alternations need an even length of at least 4, got {0}")]
    BadAlternationLength(usize),

    #[error("invariant violated: {0}")]
    InvariantViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;
