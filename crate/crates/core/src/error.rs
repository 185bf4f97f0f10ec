use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("denominator outside Z[1/6]: {0}")]
    BadDenominator(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("polynomials live on different variable tables")]
    TableMismatch,
    #[error("polynomial is not homogeneous: {0}")]
    Inhomogeneous(String),
    #[error("degree {degree} exceeds bound {bound}")]
    DegreeBound { degree: u32, bound: u32 },
    #[error("{0}")]
    Invalid(String),
    #[error("not a member of the ideal; residual {0}")]
    NotMember(String),
    #[error("map is not surjective up to degree {bound}: no preimage for {generator}")]
    NotSurjective { generator: String, bound: u32 },
    #[error("{class} is a zero divisor: annihilator {witness} in degree {degree}")]
    ZeroDivisor { class: String, witness: String, degree: u32 },
    #[error("symmetric reduction failed: {0}")]
    NotSymmetric(String),
    #[error("localization: {0}")]
    Localization(String),
    #[error("claimed generator {0} is not invariant")]
    NotInvariant(String),
    #[error("mismatch for {name}: expected {expected}, computed {computed}")]
    Mismatch { name: String, expected: String, computed: String },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
