use thiserror::Error;

/// Library-wide error type.
///
/// The CLI maps these onto its exit-code contract: schema and diagram
/// problems are input errors, `CapacityExceeded` is a capacity error, and
/// everything that signals a violated algebraic identity is a mismatch.
#[derive(Debug, Error)]
pub enum Error {
    /// The input could not be parsed against the APD schema.
    #[error("malformed input: {0}")]
    MalformedInput(String),

    /// The input parsed but does not describe a valid annular diagram.
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    /// An axis datum references an edge that does not exist.
    #[error("axis datum references nonexistent edge {edge}")]
    AxisThroughCrossing { edge: usize },

    /// The generator budget (or an internal size limit) would be exceeded.
    #[error("capacity exceeded: need {needed} generator slots, budget is {budget}")]
    CapacityExceeded { needed: u128, budget: u64 },

    /// A map that must be homogeneous of a fixed (r, q, k) shift has stray entries.
    #[error("grading leak: {0}")]
    GradingLeak(String),

    /// A claimed chain contraction fails one of its side conditions.
    #[error("contraction invalid: {0}")]
    ContractionInvalid(String),

    /// A square matrix handed in as a differential does not square to zero
    /// (or is not grading-homogeneous of degree +1).
    #[error("not a differential: {0}")]
    NotADifferential(String),
}

pub type Result<T> = std::result::Result<T, Error>;
