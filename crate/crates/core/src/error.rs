use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit {qubit} out of range for a {n}-qubit register")]
    SupportOutOfRange { qubit: usize, n: usize },
    #[error("gate support has repeated qubit {0}")]
    DuplicateSupport(usize),
    #[error("gate matrix is not unitary (‖U†U − I‖_F = {deviation:e})")]
    NonUnitary { deviation: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("unsupported gate: {0}")]
    UnsupportedGate(String),
    #[error("post-selection event has zero probability")]
    ZeroPostselection,
    #[error("invalid qubit partition: {0}")]
    InvalidPartition(String),
    #[error("layout does not match family: {0}")]
    LayoutMismatch(String),
    #[error("theta = {theta} outside [0, {m}]")]
    ThetaOutOfRange { theta: f64, m: f64 },
    #[error("instance too large for enumeration: {0}")]
    TooLarge(String),
    #[error("operation not supported for family {0}")]
    UnsupportedFamily(String),
    #[error("diagonal is not representable as an Ising interaction (max residual {residual:e})")]
    NotIsingRepresentable { residual: f64 },
    #[error("circuit is not in IQP form: {0}")]
    NotIqpForm(String),
    #[error("Ising partition function disagrees with simulation by {0:e}")]
    IsingMismatch(f64),
    #[error("duplicate interpolation node {0}")]
    DuplicateNodes(f64),
    #[error("underdetermined fit: {count} samples for {coeffs} coefficients")]
    Underdetermined { count: usize, coeffs: usize },
    #[error("degenerate sample plan: {0}")]
    DegeneratePlan(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
