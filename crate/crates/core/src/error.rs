use thiserror::Error;

/// Errors raised by the core pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("complex roots: discriminant {0} is negative")]
    ComplexRoots(String),

    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("mixed quadratic fields: sqrt({0}) and sqrt({1})")]
    MixedFields(String, String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("map is degenerate (both forms vanish at {0})")]
    Degenerate(String),

    #[error("wronskian vanishes identically; not a degree-2 morphism")]
    ZeroWronskian,

    #[error("multipliers do not lie in a quadratic field: {0}")]
    NotQuadratic(String),

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("prime {0} exceeds the supported range for database tables")]
    PrimeTooLarge(u32),

    #[error("prime {0} is not covered by the database")]
    UncoveredPrime(u32),

    #[error("map {0} is not in sigma normal form modulo {1}")]
    NotNormalForm(String, u32),

    #[error("database inconsistency: {0}")]
    Inconsistent(String),

    #[error("invalid database file: {0}")]
    DbFormat(String),

    #[error("no catalog structure matches the computed graph {0}")]
    NoCatalogMatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point {0} is not a vertex of the graph")]
    AbsentPoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
