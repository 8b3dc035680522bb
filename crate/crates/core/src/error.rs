use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // exact fields
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("modulus polynomial {0:?} is not monic irreducible over GF({1})")]
    ReducibleModulusPolynomial(Vec<u32>, u32),
    #[error("field of size {0} exceeds the 2^16 limit")]
    FieldTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("syntax error in {input:?}: {reason}")]
    SyntaxError { input: String, reason: String },
    #[error("value {0:?} does not belong to the field")]
    ValueOutOfField(String),

    // words and sequences
    #[error("word length {len} exceeds the cap {cap}")]
    WordTooLarge { len: usize, cap: usize },
    #[error("condition not satisfied within n <= {0}")]
    NotSatisfiedWithinBound(usize),
    #[error("unknown sequence id {0:?}")]
    UnknownSequence(String),
    #[error("sequence {0} is not of the required kind")]
    WrongSequenceKind(String),

    // polynomials
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("symbolic expansion exceeded {0} monomials")]
    SymbolicBlowup(usize),

    // Lie algebras
    #[error("antisymmetry violated at ({0},{1})")]
    AntisymmetryViolation(usize, usize),
    #[error("Jacobi identity violated at ({0},{1},{2})")]
    JacobiViolation(usize, usize, usize),
    #[error("subspace is not a subalgebra")]
    NotASubalgebra,
    #[error("operation requires characteristic 0 (field has characteristic {0})")]
    UnsupportedCharacteristic(u64),
    #[error("enumeration of {size} elements exceeds the cap {cap}")]
    EnumerationTooLarge { size: u128, cap: u128 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    // finite groups
    #[error("group order exceeds the cap {0}")]
    OrderExceedsCap(usize),
    #[error("group has nontrivial solvable radical of order {0}")]
    NotSemisimple(usize),
    #[error("map is not an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("sequence {0} is not autocorrect")]
    SequenceNotAutocorrect(String),
    #[error("invalid group element: {0}")]
    InvalidElement(String),

    // catalog
    #[error("bad parameters for {model}: {reason}")]
    BadParams { model: String, reason: String },
    #[error("schema error at {location}: {reason}")]
    SchemaError { location: String, reason: String },
    #[error("validation error at {location}: {source}")]
    ValidationError {
        location: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn syntax(input: &str, reason: impl Into<String>) -> Self {
        Error::SyntaxError {
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}
