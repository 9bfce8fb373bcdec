use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid bit-string {0:?}")]
    InvalidBits(String),
    #[error("label {label} does not fit register {register} of width {width}")]
    InvalidLabel {
        register: String,
        width: usize,
        label: String,
    },
    #[error("expected {expected} labels, got {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("unknown register {0:?}")]
    UnknownRegister(String),
    #[error("duplicate register name {0:?}")]
    DuplicateRegister(String),
    #[error("register {0:?} has zero width")]
    EmptyRegister(String),
    #[error("layout needs {requested} bits, cap is {max}")]
    TooManyBits { requested: usize, max: usize },
    #[error("state and operator layouts differ")]
    LayoutMismatch,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("matrix rows are linearly dependent")]
    DependentRows,
    #[error("{family} is defined for n in {allowed}, got n = {n}")]
    ProblemOutOfRange {
        family: &'static str,
        allowed: &'static str,
        n: usize,
    },
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("duplicate setting {0}")]
    DuplicateSetting(String),
    #[error("setting {0} is not in the problem's setting set")]
    UnknownSetting(String),
    #[error("unsupported oracle: {0}")]
    UnsupportedOracle(String),
    #[error("algorithm {kind} cannot solve problem {problem}: {reason}")]
    IncompatibleKind {
        kind: &'static str,
        problem: String,
        reason: &'static str,
    },
    #[error("measurement outcome {0} has zero probability")]
    ZeroProbability(String),
    #[error("{what} exceeds cap: {found} > {limit}")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        found: usize,
    },
    #[error("samples span the whole space, no nonzero period is orthogonal to all of them")]
    InconsistentSamples,
    #[error("invalid halving: {0}")]
    InvalidHalving(String),
}
