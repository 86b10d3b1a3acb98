use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix dimension {0} is odd; Majorana matrices must be 2n x 2n")]
    OddDimension(usize),
    #[error("matrix is not square ({rows} x {cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not skew-symmetric: max |A + A^T| = {asymmetry:e}")]
    NotSkewSymmetric { asymmetry: f64 },
    #[error("non-finite matrix entry at ({0}, {1})")]
    NonFinite(usize, usize),
    #[error("spectral radius {nu} exceeds 1 beyond tolerance")]
    SpectrumOutOfRange { nu: f64 },
    #[error("ground state is degenerate: zero modes {modes:?} (energies {energies:?})")]
    DegenerateGroundState { modes: Vec<usize>, energies: Vec<f64> },
    #[error("site range [{first}, {last}] is invalid for {n} sites")]
    RangeOutOfBounds { first: usize, last: usize, n: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("first determinant is singular (|d1| = {0:e})")]
    SingularInput(f64),
    #[error("eigenvalues of M could not be paired as +-i nu (mismatch {0:e})")]
    UnpairedSpectrum(f64),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("chain needs at least 2 sites, got {0}")]
    TooFewSites(usize),
    #[error("oracle supports at most 7 modes, got {0}")]
    TooLarge(usize),
    #[error("block value {0} outside [-1, 1]")]
    InvalidLambda(f64),
    #[error("only leading site ranges [1, m] are supported")]
    UnsupportedRange,
    #[error("dense correlation has imaginary residue {0:e}")]
    NonRealResult(f64),
    #[error("r_max = {r_max} invalid for n = {n}: the boundary effect function is defined only for 1 <= r < n/2")]
    InvalidRMax { r_max: usize, n: usize },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("site count {0} is not divisible by four")]
    NotDivisibleByFour(usize),
    #[error("site count {0} is not even")]
    NotEven(usize),
    #[error("fit window needs at least 5 points, found {0}")]
    InsufficientData(usize),
    #[error("fit window contains non-positive values")]
    NonPositiveValues,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("extended precision needs pure global states")]
    MixedGlobalState,
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
