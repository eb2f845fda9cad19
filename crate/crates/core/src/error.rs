use thiserror::Error;

/// Structural assumptions checked by the Guruswami–Sudan style pipelines.
#[derive(Clone, Copy, Debug, Eq, PartialEq)]
pub enum Assumption {
    /// Multiplicity does not exceed the list size.
    MultiplicityAtMostListSize,
    /// `b > 0` and `b > ell * k`.
    PositiveWeightBound,
    /// `0 <= k < n`.
    WeightBelowPointCount,
    /// All points carry the same multiplicity.
    UniformMultiplicity,
}

impl std::fmt::Display for Assumption {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Assumption::MultiplicityAtMostListSize => "H1 (m <= ell)",
            Assumption::PositiveWeightBound => "H2 (b > 0 and b > ell*k)",
            Assumption::WeightBelowPointCount => "H3 (0 <= k < n)",
            Assumption::UniformMultiplicity => "H4 (uniform multiplicity)",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Debug, Eq, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element does not belong to this field")]
    CtxMismatch,
    #[error("field has {order} elements but {required} are needed")]
    FieldTooSmall { order: u128, required: u128 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial is not invertible modulo X^n")]
    NotInvertible,
    #[error("interpolation nodes are not distinct")]
    DuplicateNode,
    #[error("length {len} is smaller than degree {degree}")]
    BadLength { len: usize, degree: usize },
    #[error("no monomial satisfies the degree constraints")]
    NoSolutionSpace,
    #[error("degree bound violated: {0}")]
    DegreeViolation(String),
    #[error("matrix of {rows}x{cols} exceeds the dense limit")]
    TooLarge { rows: usize, cols: usize },
    #[error("generator has the wrong displacement operator")]
    WrongTag,
    #[error("assumption violated: {0}")]
    AssumptionViolated(Assumption),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("all candidate polynomials are zero")]
    ZeroInput,
    #[error("randomized search exhausted after {0} attempts")]
    RandomSearchExhausted(usize),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
