use thiserror::Error;

/// Failures raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field too large: {0}")]
    FieldTooLarge(String),
    #[error("invalid extension modulus: {0}")]
    InvalidModulus(String),
    #[error("field context mismatch: {0}")]
    ContextMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("zero has no inverse or multiplicative order")]
    ZeroElement,
    #[error("operation requires a finite field, got {0}")]
    InfiniteField(String),
    #[error("operation requires an extension field, got {0}")]
    NotExtension(String),
    #[error("polynomial of degree {degree} exceeds the bound {bound}")]
    DegreeOverflow { degree: u32, bound: u32 },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("coefficient `{0}` is not an element of the field")]
    CoefficientNotInField(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("field of order {order} is too small for degree {degree}: need |K| > d")]
    FieldTooSmall { order: u64, degree: u32 },
    #[error("search budget of {budget} trials exhausted")]
    BudgetExhausted { budget: u64 },
    #[error("coefficient is not fixed by the Galois group: {0}")]
    NotFrobeniusFixed(String),
    #[error("construction requires characteristic 0, got characteristic {0}")]
    PositiveCharacteristic(u64),
    #[error("q-analog nodes collide: alpha_{i} = alpha_{j}")]
    OrderTooSmall { i: u32, j: u32 },
    #[error("x^{m} = y^{m}: the pair (x, y) is not admissible")]
    PowerCollision { m: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("oracle size cap exceeded: {0}")]
    OracleCap(String),
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("malformed JSON: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
