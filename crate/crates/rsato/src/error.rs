use thiserror::Error;

/// Error type shared by every stage of the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("mixed quadratic fields: sqrt({0}) vs sqrt({1})")]
    MixedFields(i64, i64),
    #[error("{0} is not squarefree (or is 0/1)")]
    NotSquarefree(i64),
    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),
    #[error("domain error: {quantity} must be positive, ball is [{low}, {high}]")]
    NonPositiveBall {
        quantity: String,
        low: String,
        high: String,
    },
    #[error("negative radicand in radical expression: {0}")]
    NegativeRadicand(String),
    #[error("inverse of zero series")]
    ZeroSeriesInverse,
    #[error("series sqrt requires constant term 1, got {0}")]
    SqrtConstantTerm(String),
    #[error("not a polynomial of degree <= {maxdeg}: residual at q^{exponent}")]
    NotPolynomial { maxdeg: usize, exponent: String },
    #[error("substitute_root supports n in {{2, 3}}, got {0}")]
    UnsupportedRoot(u32),
    #[error("registry invariant failed for {label}: {field}: {detail}")]
    RegistryInvariant {
        label: String,
        field: &'static str,
        detail: String,
    },
    #[error("group file parse error at line {line}: {detail}")]
    GroupFileParse { line: usize, detail: String },
    #[error("unknown group label: {0}")]
    UnknownGroup(String),
    #[error("modular equation kernel is empty (order too low or degree wrong)")]
    EmptyKernel,
    #[error("modular equation kernel has dimension {0} > 1 after retries")]
    AmbiguousKernel(usize),
    #[error("discovered modular equation is not symmetric at ({0},{1})")]
    AsymmetricKernel(usize, usize),
    #[error("irreducible factor of degree {degree} > 2 over Q: {poly}")]
    UnsupportedFactor { degree: usize, poly: String },
    #[error("fixed-point identity failed for {label}: {detail}")]
    FixedPoint { label: String, detail: String },
    #[error("singular diagonal point: Psi_Y(x0, x0) = 0")]
    SingularDiagonal,
    #[error("no diagonal root matches the eta-product value of x(tau0) for {0}")]
    NoMatchingRoot(String),
    #[error("{count} diagonal roots match the eta-product value for {label} at full precision")]
    AmbiguousRoot { label: String, count: usize },
    #[error("imaginary part of {quantity} excludes 0: [{low}, {high}]")]
    NotReal {
        quantity: String,
        low: String,
        high: String,
    },
    #[error("series for {label} did not converge: tail ratio {ratio} >= 0.95")]
    NonConvergent { label: String, ratio: f64 },
    #[error("term cap {0} exceeded")]
    TermCapExceeded(usize),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
