use thiserror::Error;

/// Errors raised by the field, form, symbol and index layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields: {0} vs {1}")]
    TowerMismatch(String, String),
    #[error("zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("zero element has no valuation or power class")]
    ZeroElement,
    #[error("element has negative valuation {0} at the place")]
    NegativeValuation(i64),
    #[error("characteristic {p} divides {n}")]
    CharacteristicDivides { p: u32, n: u32 },
    #[error("wild ramification: characteristic {p} divides {n}")]
    WildRamification { p: u32, n: u32 },
    #[error("roots of unity of order {n} are missing from a field of size {q}")]
    RootsOfUnityMissing { n: u32, q: u64 },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("unsupported tower: {0}")]
    UnsupportedTower(String),
    #[error("characteristic two is not supported for quadratic forms")]
    CharacteristicTwo,
    #[error("form has odd dimension {0}")]
    OddDimension(usize),
    #[error("zero entry")]
    ZeroEntry,
    #[error("empty input")]
    EmptyInput,
    #[error("class is not a sum of exactly two quaternion symbols")]
    NotBiquaternion,
    #[error("not a line arrangement: {0}")]
    NotALineArrangement(String),
    #[error("intersection point is not rational over the base field")]
    IrrationalIntersection,
    #[error("ramification is not a normal crossing at the center: {0}")]
    NotNormalCrossing(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("place is not a place of this field: {0}")]
    InvalidPlace(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
