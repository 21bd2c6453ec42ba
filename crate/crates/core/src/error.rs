use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // algebra
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is outside the supported range 2..65536")]
    OutOfRange(u64),
    #[error("operands belong to different fields (GF({0}) vs GF({1}))")]
    FieldMismatch(u32, u32),
    #[error("operation requires a nonzero field element")]
    ZeroElement,
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("modulus polynomial must be nonconstant")]
    ConstantModulus,

    // factorization
    #[error("{q} and {m} are not coprime")]
    NotCoprime { q: u64, m: u64 },
    #[error("x^{n} - a over GF({p}) is outside the squarefree regime (gcd(n, p) > 1)")]
    NotSquarefreeRegime { n: usize, p: u32 },
    #[error("polynomial must have degree at least 1")]
    ConstantPoly,
    #[error("binomial gcd has an impossible shape: {0}")]
    StructureViolation(String),

    // lincode
    #[error("matrix has no rows")]
    EmptyMatrix,
    #[error("enumeration needs {needed} codewords, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("generator matrix has rank {rank}, expected {k}")]
    RankDeficient { rank: usize, k: usize },
    #[error("matrix rows have inconsistent lengths")]
    RaggedMatrix,
    #[error("invalid code parameters: {0}")]
    InvalidParams(String),

    // constacyclic
    #[error("generator does not divide x^{n} - {a}")]
    NotADivisor { n: usize, a: u32 },
    #[error("generator of degree {deg} yields the zero code for length {n}")]
    DegenerateGenerator { deg: usize, n: usize },
    #[error("generator is zero")]
    ZeroGenerator,
    #[error("g does not divide x^{n} - {a}, so it is not a canonical generator")]
    NotCanonical { n: usize, a: u32 },

    // mtcore
    #[error("vector length {got} does not match total block length {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("annihilator degree {expected} disagrees with matrix rank {rank}")]
    RankMismatch { expected: usize, rank: usize },
    #[error("shift x^{index}*G is dependent on the earlier shifts")]
    DependentShifts { index: usize },
    #[error("invalid block: {0}")]
    InvalidBlock(String),

    // constructions
    #[error("binomial gcd is {0}, expected 1")]
    GcdNotOne(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("check polynomials have unequal degrees {0:?}")]
    UnequalDimensions(Vec<usize>),
    #[error("predicted {what} = {predicted} but the built code has {actual}")]
    PredictionMismatch {
        what: &'static str,
        predicted: usize,
        actual: usize,
    },

    // search
    #[error("no coprime sample after {0} consecutive rejections")]
    ExhaustedRejections(usize),
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    // io / formats
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
