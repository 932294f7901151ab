use thiserror::Error;

/// Errors produced by the hypergraph, framework and solver layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("unsupported dimension: expected d = {expected}, got d = {found}")]
    UnsupportedDimension { expected: usize, found: usize },
    #[error("topology error: {0}")]
    Topology(String),
    #[error("hyperedge {0:?} is not present")]
    MissingHyperedge(Vec<usize>),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("configuration is flat (lies in a proper affine subspace)")]
    FlatConfiguration,
    #[error("pinning base {0:?} has zero volume")]
    DegenerateBase(Vec<usize>),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("excluded root: {0}")]
    ExcludedRoot(String),
    #[error("hypergraph is not generically rigid")]
    FlexibleInput,
    #[error("no Newton start converged")]
    NoConvergence,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
}

/// Coarse grouping used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Input,
    Degeneracy,
    Internal,
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::InvalidParameters(_)
            | Error::UnsupportedDimension { .. }
            | Error::Topology(_)
            | Error::MissingHyperedge(_)
            | Error::InvalidFan(_)
            | Error::Parse(_) => ErrorCategory::Input,
            Error::FlatConfiguration
            | Error::DegenerateBase(_)
            | Error::DegenerateInput(_)
            | Error::ExcludedRoot(_)
            | Error::FlexibleInput
            | Error::NoConvergence => ErrorCategory::Degeneracy,
            Error::InternalConsistency(_) => ErrorCategory::Internal,
        }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameters(_) => "invalid-parameters",
            Error::UnsupportedDimension { .. } => "unsupported-dimension",
            Error::Topology(_) => "topology",
            Error::MissingHyperedge(_) => "missing-hyperedge",
            Error::InvalidFan(_) => "invalid-fan",
            Error::FlatConfiguration => "flat-configuration",
            Error::DegenerateBase(_) => "degenerate-base",
            Error::DegenerateInput(_) => "degenerate-input",
            Error::ExcludedRoot(_) => "excluded-root",
            Error::FlexibleInput => "flexible-input",
            Error::NoConvergence => "no-convergence",
            Error::Parse(_) => "parse",
            Error::InternalConsistency(_) => "internal-consistency",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
