use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("even root of a negative number")]
    EvenRootOfNegative,

    #[error("root index must be at least 1")]
    ZeroRootIndex,

    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("trailing coefficient a_n must be non-zero")]
    ZeroTrailingCoefficient,

    #[error("polynomial must have at least one coefficient")]
    EmptyPolynomial,

    #[error("coefficient schedule has no column {0}")]
    ScheduleExhausted(usize),

    #[error("ratio entry undefined: coefficient a[{row},{column}] is zero")]
    UndefinedRatio { row: usize, column: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("no convergence after {iterations} truncations: {reason}")]
    NonConvergence {
        iterations: usize,
        reason: String,
        /// Last few truncation values, rendered as decimals (or "undefined").
        evidence: Vec<String>,
    },

    #[error("forms belong to different fields: ({0}) vs ({1})")]
    FieldMismatch(String, String),

    #[error("form has zero norm and is not invertible")]
    ZeroNorm,

    #[error("degenerate radicand: {0}")]
    DegenerateRadicand(String),

    #[error("precision limit reached while certifying {0} digits")]
    PrecisionLimit(u32),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("undefined family: {0}")]
    UndefinedFamily(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed fixture: {0}")]
    MalformedFixture(String),
}
