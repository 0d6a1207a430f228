use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the toolkit.
///
/// Verdicts that are part of a normal answer (a failed axiom, a refuted
/// contraction) are returned as report values, not as errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A value could not be constructed from the given parts.
    #[error("construction error: {0}")]
    Construction(String),

    /// An input document is malformed; `path` locates the offending field.
    #[error("invalid document at `{path}`: {message}")]
    Parse { path: String, message: String },

    /// A grid search found no qualifying value; refine the grid.
    #[error("witness not found: {0}")]
    WitnessNotFound(String),

    /// Exhaustive enumeration would exceed the configured cap.
    #[error("enumeration cap exceeded: {count} candidates > cap {cap}")]
    CapExceeded { count: u128, cap: u64 },

    /// A precondition of an analysis operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A hypothesis of a fixed-point procedure does not hold.
    #[error("hypothesis `{premise}` not satisfied: {detail}")]
    Hypothesis { premise: String, detail: String },

    /// No chain joins two points in the threshold graph.
    #[error("not chainable: no chain from `{from}` to `{to}`; components {components:?}")]
    NotChainable {
        from: String,
        to: String,
        components: Vec<Vec<String>>,
    },

    /// A property guaranteed by a verified hypothesis failed during a run.
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    pub(crate) fn hypothesis(premise: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Hypothesis {
            premise: premise.into(),
            detail: detail.into(),
        }
    }
}
