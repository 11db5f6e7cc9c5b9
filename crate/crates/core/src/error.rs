use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),

    #[error("empty alphabet")]
    EmptyAlphabet,

    #[error("adjacency entry ({row},{col}) = {value} is not 0 or 1")]
    NonBinaryEntry { row: usize, col: usize, value: i64 },

    #[error("matrix is not square or does not match the alphabet ({0})")]
    Shape(String),

    #[error("word is not allowed: {0}")]
    DisallowedWord(String),

    #[error("matrix is reducible")]
    Reducible,

    #[error("power iteration did not converge after {iterations} iterations (delta {delta:e})")]
    NoConvergence { iterations: usize, delta: f64 },

    #[error("enumeration of {count} items exceeds the cap of {cap}")]
    CapExceeded { count: String, cap: usize },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid factor code: {0}")]
    InvalidCode(String),

    #[error("symbol `{0}` is not a singleton clump")]
    NotSingletonClump(String),

    #[error("zero mass: {0}")]
    ZeroMass(String),

    #[error("retained mass {retained} is below the threshold {threshold}; pass an override to proceed")]
    TruncationMass { retained: f64, threshold: f64 },

    #[error("block distributions have inconsistent marginals (max deviation {0:e})")]
    InconsistentMarginals(f64),

    #[error("pushforward mismatch at block length {length} (max deviation {deviation:e})")]
    PushforwardMismatch { length: usize, deviation: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown gallery entry `{0}`")]
    UnknownGallery(String),

    #[error("exact arithmetic unavailable: {0}")]
    NotExact(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// Short machine-readable tag for reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::UnknownSymbol(_) => "unknown_symbol",
            Error::DuplicateSymbol(_) => "duplicate_symbol",
            Error::EmptyAlphabet => "empty_alphabet",
            Error::NonBinaryEntry { .. } => "non_binary_entry",
            Error::Shape(_) => "shape",
            Error::DisallowedWord(_) => "disallowed_word",
            Error::Reducible => "reducible",
            Error::NoConvergence { .. } => "no_convergence",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::InvalidMeasure(_) => "invalid_measure",
            Error::InvalidCode(_) => "invalid_code",
            Error::NotSingletonClump(_) => "not_singleton_clump",
            Error::ZeroMass(_) => "zero_mass",
            Error::TruncationMass { .. } => "truncation_mass",
            Error::InconsistentMarginals(_) => "inconsistent_marginals",
            Error::PushforwardMismatch { .. } => "pushforward_mismatch",
            Error::InsufficientData(_) => "insufficient_data",
            Error::Infeasible(_) => "infeasible",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::UnknownGallery(_) => "unknown_gallery",
            Error::NotExact(_) => "not_exact",
        }
    }
}
