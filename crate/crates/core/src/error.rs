use thiserror::Error;

/// Failure to read a rational literal or a matrix.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("not a rational literal: {0:?}")]
    Rational(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("rows have different lengths")]
    Ragged,
    #[error("{0}")]
    Format(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("empty generator list")]
    EmptyInput,
    #[error("generators must be positive, got {0}")]
    NonPositive(i64),
    #[error("generators have gcd {0}, expected 1")]
    GcdNotOne(u64),
    #[error("{0} is not a positive element of the semigroup")]
    NotMember(i64),
    #[error("multiplicity {0} is below 3")]
    MultiplicityTooSmall(u32),
    #[error("genus {g} is below the required minimum {min}")]
    GenusTooSmall { g: u32, min: u32 },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("{e} is below the conductor {c}")]
    BelowConductor { e: i64, c: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PointSetError {
    #[error("need at least two homogeneous coordinates and one point")]
    TooSmall,
    #[error("point {0} is the zero vector")]
    ZeroPoint(usize),
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("points do not span: rank {rank} < {n}")]
    RankDeficient { rank: usize, n: usize },
    #[error("Gale transform has a zero column at point {0}")]
    ZeroGaleColumn(usize),
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("out of range: {0}")]
    BadRange(String),
    #[error("exhaustive subset check limited to 12 points, got {0}")]
    TooLargeForExhaustive(usize),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("degree {0} not covered; use a positive degree or -1")]
    BadDegree(i64),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("no admissible configuration after {0} attempts")]
    RetryExhausted(usize),
    #[error("degenerate configuration: {0}")]
    DegenerateConfig(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    PointSet(#[from] PointSetError),
}
