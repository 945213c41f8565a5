use thiserror::Error;

use crate::signature::AritySignature;

pub type Result<T, E = WreathError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WreathError {
    #[error("invalid arity signature: {0}")]
    InvalidSignature(String),

    #[error("signature mismatch: {left} vs {right}")]
    SignatureMismatch {
        left: AritySignature,
        right: AritySignature,
    },

    #[error("invalid vertex address {address:?} for signature {signature}")]
    InvalidAddress {
        address: Vec<usize>,
        signature: AritySignature,
    },

    #[error("operation requires depth >= 1")]
    DepthZero,

    #[error("level {level} out of range for depth {depth}")]
    LevelOutOfRange { level: usize, depth: usize },

    #[error("signature {0} is not binary (all arities must be 2)")]
    NonBinarySignature(AritySignature),

    #[error("expected {expected} sections, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("root power {power} out of range for arity {arity}")]
    PowerOutOfRange { power: u32, arity: u32 },

    #[error("label {label} at level {level} vertex {vertex} out of range for arity {arity}")]
    LabelOutOfRange {
        level: usize,
        vertex: usize,
        label: u32,
        arity: u32,
    },

    #[error("element is not in the derived subgroup: {0}")]
    NotInDerived(String),

    #[error("element is not in the target group: {0}")]
    NotInGroup(String),

    #[error("witness verification failed: {0}")]
    VerificationFailed(String),

    #[error("group order {order} exceeds oracle guard {guard}")]
    GuardExceeded { order: String, guard: u64 },

    #[error("{pairs} pairs exceed cap {cap}; verify with the solver instead")]
    CapExceeded { pairs: u128, cap: u128 },

    #[error("unsupported group kind for this operation: {0}")]
    UnsupportedKind(String),
}
