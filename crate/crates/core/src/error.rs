use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// `c2 * p >= 1`: increasing the code distance makes the logical error
    /// rate worse, so no distance meets the target.
    #[error(
        "physical error rate {p} is at or above threshold {threshold} (c2*p = {product}); \
         if c2*p > 1 the logical error rate gets worse as the code grows"
    )]
    AboveThreshold { p: f64, threshold: f64, product: f64 },

    #[error("insufficient data for fit: {usable} usable points (need at least {required}), {dropped} dropped for having fewer than 10 failures")]
    InsufficientData {
        usable: usize,
        required: usize,
        dropped: usize,
    },

    #[error("degenerate fit design: {0}")]
    DegenerateDesign(String),

    #[error("curves do not cross within the sampled grid")]
    NoCrossing,

    /// The correction derived from a matching left a non-empty syndrome.
    #[error("residual error pattern has {0} unsatisfied stabilizers after correction")]
    NonTrivialResidualSyndrome(usize),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for usage and configuration problems, as opposed to domain
    /// failures such as an above-threshold error rate.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Config(_) | Error::Schema(_) | Error::InvalidInput(_) | Error::Json(_) | Error::Csv(_)
        )
    }
}
