use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("period must be positive, got {0}")]
    InvalidPeriod(i64),
    #[error("eventually periodic set needs at least one progression start")]
    EmptyProgression,
    #[error("invalid window [{lo}, {hi}]")]
    InvalidWindow { lo: i64, hi: i64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("result not certifiable as exact: {0}")]
    NotExact(String),
    #[error("enumerator `{name}` is not strictly increasing: {prev} then {next}")]
    NonMonotone { name: String, prev: String, next: String },
    #[error("enumerator `{0}` ended before the requested horizon")]
    Exhausted(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("need at least two elements in the window, found {0}")]
    TooFewElements(usize),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("modulus {m} exceeds the configured maximum {max}")]
    ModulusTooLarge { m: u32, max: u32 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("construction failed: {0}")]
    Construction(String),
}
