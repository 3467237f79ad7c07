use thiserror::Error;

use crate::partition::Partition;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("beta-set violates the charge condition ({positives} particles at >= 0, {holes} holes below 0)")]
    ChargeViolation { positives: usize, holes: usize },

    #[error("partition ({theta}) is not {m}-splittable")]
    NotSplittable { theta: Partition, m: usize },

    #[error("modulus must be at least {min}, got {m}")]
    InvalidModulus { m: usize, min: usize },

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    /// A quantity that the underlying identities force to be an integer came
    /// out fractional. Always an arithmetic bug.
    #[error("non-integral result in {context}: {value}")]
    NonIntegral { context: String, value: String },

    #[error("series has a nonzero constant term")]
    NonZeroConstant,

    #[error("exponent z^{z} u^{u} lies outside the truncation (z <= {max_z}, u <= {max_u})")]
    OutOfTruncation {
        z: u32,
        u: u32,
        max_z: u32,
        max_u: u32,
    },

    #[error("unsupported substitution: {0}")]
    UnsupportedSubstitution(String),

    #[error("Euler relation violated for V={vertices}, F={faces}, n={n}, m={m}")]
    EulerViolation {
        vertices: usize,
        faces: usize,
        n: usize,
        m: usize,
    },

    #[error("enumeration needs {needed} tuples, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("invalid query: {0}")]
    InvalidQuery(String),
}
