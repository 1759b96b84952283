use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Variants split into two families: violated hypotheses (bad inputs, a
/// theorem's preconditions not met) and internal invariant failures, which
/// signal a bug in a construction. [`Error::is_internal`] tells them apart.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field of order {0} is too large")]
    FieldTooLarge(u64),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("no element of order {n} exists: {n} does not divide q - 1 = {group}")]
    NoSuchRoot { n: u64, group: u64 },
    #[error("parse error: {0}")]
    Parse(String),

    #[error("singular curve: discriminant is zero")]
    SingularCurve,
    #[error("no subgroup of order {0}")]
    NoSuchSubgroup(u64),
    #[error("no curve found: {0}")]
    NoCurveFound(String),
    #[error("group structure inconsistent: {0}")]
    StructureInconsistent(String),
    #[error("point is not on the curve")]
    NotOnCurve,

    #[error("zero denominator")]
    ZeroDenominator,
    #[error("function has a pole at the evaluation point")]
    PoleError,
    #[error("precision exhausted while expanding a nonzero function")]
    PrecisionExhausted,
    #[error("coordinate maps do not satisfy the curve equation")]
    NotAnEndomorphism,
    #[error("degenerate divisor: {0}")]
    DegenerateDivisor(String),
    #[error("function is not in the given space")]
    NotInSpace,

    #[error("unsupported curve family for automorphism catalog: {0}")]
    UnsupportedFamily(String),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("invariant subspace has dimension {0}, expected 2")]
    InvariantSpaceDimension(usize),

    #[error("no function with the required pole divisor was found (index {0})")]
    ExistenceFailure(usize),
    #[error("not enough completely split fibers: need {needed}, have {available}")]
    NotEnoughFibers { needed: usize, available: usize },
    #[error("rank mismatch: expected {expected}, got {actual}")]
    RankMismatch { expected: usize, actual: usize },
    #[error("automorphism subgroups intersect nontrivially (|A1 ∩ A2| = {0})")]
    SubgroupsIntersect(usize),
    #[error("torsion condition failed: {0}")]
    TorsionConditionFailed(String),
    #[error("singular repair matrix at position {0}")]
    SingularRepairMatrix(usize),
    #[error("missing symbol at position {0}")]
    MissingSymbols(usize),
    #[error("enumeration budget exceeded: need {needed}, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("invariant failed: {0}")]
    Invariant(String),
}

impl Error {
    /// True for failures that indicate a construction bug rather than a
    /// bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::StructureInconsistent(_)
                | Error::PrecisionExhausted
                | Error::InvariantSpaceDimension(_)
                | Error::ExistenceFailure(_)
                | Error::RankMismatch { .. }
                | Error::SingularRepairMatrix(_)
                | Error::Invariant(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
