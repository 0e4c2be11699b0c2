//! Error type shared by all modules, with the process exit-code mapping
//! used by the `rtmc` binary.

/// Everything that can go wrong while building systems or running pipelines.
///
/// Variants are grouped into four exit classes (see [`Error::exit_code`]):
/// configuration/input errors (2), big-image/preimage certificate failures
/// (3), iteration/horizon failures (4) and violated mathematical
/// assertions (5).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("config error: {0}")]
    Config(String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("word enumeration would produce {count} words, over the cap {cap}")]
    Overflow { count: u128, cap: u64 },
    #[error("non-finite value while averaging over the base")]
    NonFinite,
    #[error("no return to the target set within {0} steps")]
    NoReturn(usize),
    #[error("empty fiber: symbol {symbol} at state {state} has no admissible predecessor")]
    EmptyFiber { state: usize, symbol: usize },
    #[error("word of length {len} is too short for an exact depth-{depth} sum of {n} terms")]
    InsufficientWordLength { len: usize, depth: usize, n: usize },
    #[error("anchor missing: state {state} does not admit symbol {symbol}")]
    AnchorMissing { state: usize, symbol: usize },
    #[error("transfer operations are exact only for potential depth <= 2, got {0}")]
    DepthUnsupported(usize),
    #[error("big images/preimages rejected: {0}")]
    BipRejected(String),
    #[error("truncation unsound: {0}")]
    TruncationUnsound(String),
    #[error("pair ({a},{b}) not mixed within horizon {horizon}")]
    NotMixedWithinHorizon { a: usize, b: usize, horizon: usize },
    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),
    #[error("matrix row {row} at state {state} is identically zero")]
    ZeroRow { state: usize, row: usize },
    #[error("matrix at state {state}, row {row} is not stochastic (sum {sum})")]
    NotStochastic { state: usize, row: usize, sum: f64 },
    #[error("hypothesis failed: {0}")]
    HypothesisFail(String),
    #[error("quotient sandwich violated: {0}")]
    SandwichViolation(String),
    #[error("divergent diagnostics: {0}")]
    DivergentDiagnostics(String),
    #[error("assertion failed: {0}")]
    AssertionFailed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 config, 3 bip, 4 convergence,
    /// 5 violated assertion.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            Config(_) | UnknownFixture(_) | Overflow { .. } | NonFinite | EmptyFiber { .. }
            | InsufficientWordLength { .. } | AnchorMissing { .. } | DepthUnsupported(_)
            | NotStochastic { .. } | ZeroRow { .. } | Io(_) | Json(_) => 2,
            BipRejected(_) | TruncationUnsound(_) => 3,
            NotMixedWithinHorizon { .. } | NoConvergence(_) | NoReturn(_) => 4,
            HypothesisFail(_) | SandwichViolation(_) | DivergentDiagnostics(_)
            | AssertionFailed(_) => 5,
        }
    }
}
