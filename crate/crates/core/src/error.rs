//! Error type shared by every module in the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected ambient rank {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("generators do not span a full-rank subgroup")]
    RankDeficient,
    #[error("first lattice is not a sublattice of the second")]
    NotASublattice,
    #[error("vector is not a member of the lattice")]
    NotAMember,
    #[error("invalid degree: {0}")]
    InvalidDegree(String),
    #[error("tameness violated: residue characteristic divides {0}")]
    TamenessViolation(String),
    #[error("radical extension collapses: index {got} below expected degree {expected}")]
    DegreeCollapse { expected: String, got: String },
    #[error("extension is not totally ramified of the required degree")]
    NotTotallyRamified,
    #[error("algebra is not division under the required criterion")]
    NotDivision,
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("target lattice does not contain the base lattice")]
    NotAnExtension,
    #[error("declared degree {degree} does not divide index {index}")]
    NonDivisibleDegrees { degree: String, index: String },
    #[error("duplicate prime {0} among primary parts")]
    DuplicatePrime(String),
    #[error("enumeration budget exceeded: needed {needed}, budget {budget}")]
    BudgetExceeded { needed: String, budget: String },
    #[error("oracle radical quotient is not a perfect square (implementation bug)")]
    NonSquareQuotient,
    #[error("tower invariant violated: {0}")]
    TowerInvariantViolation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
