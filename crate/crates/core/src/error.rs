use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is not irreducible over its base field")]
    NotIrreducible,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("extension modulus must have degree at least 2, got {0}")]
    ModulusDegree(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different field contexts")]
    CtxMismatch,
    #[error("{0} is not the cardinality of a subfield of this field")]
    NotASubfieldCardinality(u128),
    #[error("no context of cardinality {0} exists in this tower")]
    SubfieldNotInTower(u128),
    #[error("operation on the zero element")]
    ZeroElement,
    #[error("field cardinality exceeds the configured cap of {cap}")]
    CardinalityCapExceeded { cap: u128 },
    #[error("field cardinality overflows 128 bits")]
    CardinalityOverflow,
    #[error("{0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("polynomial has degree zero")]
    DegreeZero,
    #[error("enumeration of {needed} candidates exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("coefficient `{0}` is not an element of the field")]
    CoefficientOutOfField(String),
    #[error("value failed to descend to the subfield: {0}")]
    CoefficientDescentFailure(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("bivariate diamond must have positive degree in both variables")]
    DegenerateBivariate,
    #[error("weak cancellation fails: {0}")]
    WeakCancellationFails(String),
    #[error("no fast construction applies to this task")]
    NotApplicable,
    #[error("equivalent conditions disagree: {0}")]
    EquivalenceViolation(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by a configured resource limit rather than bad input.
    pub fn is_limit(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. } | Error::CardinalityCapExceeded { .. }
        )
    }
}
