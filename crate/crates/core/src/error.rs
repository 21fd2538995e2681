use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("precision must be positive")]
    BadPrecision,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("operands live over different primes ({0} and {1})")]
    PrimeMismatch(u32, u32),
    #[error("not a square in Q_p")]
    NotSquare,
    #[error("{0} is not a valid leading digit for this square root")]
    BadLeadingDigit(u32),
    #[error("-1 has no square root in Q_{0}")]
    NoSqrtMinusOne(u32),
    #[error("argument of order {order} lies outside the convergence domain (order >= {d} required)")]
    OutsideDomain { order: i64, d: i64 },
    #[error("cannot parse literal {0:?}: {1}")]
    Parse(String, String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular at working precision")]
    Singular,
    #[error("antisymmetric form is degenerate")]
    Degenerate,
    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("matrix is not integral")]
    NotIntegral,
    #[error("operation requires exact (rational) input")]
    NotExact,
    #[error("pairing of the witness pair vanishes")]
    DegeneratePair,
    #[error("{0} is not a power of p")]
    NotPowerOfP(String),
    #[error("invalid polar coordinates: {0}")]
    InvalidPolar(String),
    #[error("{0} is not in D_p")]
    NotInDp(String),
    #[error("outside the supported domain: {0}")]
    Domain(String),
    #[error("not in the image of the embedding: {0}")]
    NotInImage(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
