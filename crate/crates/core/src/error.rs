use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Numeric and accuracy failures are kept apart from input failures so the
/// CLI can map them onto different exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("structure constants violate {identity} (residual {residual:e})")]
    Structure { identity: &'static str, residual: f64 },

    #[error("flag stalls at dimension {reached} < {dim} (growth {growth:?})")]
    NotBracketGenerating {
        reached: usize,
        dim: usize,
        growth: Vec<usize>,
    },

    #[error("singular point: flag step {step} is deficient ({detail})")]
    SingularPoint { step: usize, detail: String },

    #[error("missing bracket value for word {0:?}")]
    MissingBracket(Vec<usize>),

    #[error("order {s} exceeds degree {r}; the value is zero by convention")]
    OrderExceedsDegree { r: usize, s: i64 },

    #[error("truncation order {k} too small, use at least {suggested}")]
    Truncation { k: usize, suggested: usize },

    #[error("accuracy target missed: {what} (tail estimate {tail:e})")]
    Accuracy { what: String, tail: f64 },

    #[error("unsupported group `{0}`")]
    UnsupportedGroup(String),

    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    /// Short machine-readable tag used in JSON error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Input(_) => "input",
            Error::Dimension { .. } => "dimension",
            Error::Structure { .. } => "structure",
            Error::NotBracketGenerating { .. } => "not_bracket_generating",
            Error::SingularPoint { .. } => "singular_point",
            Error::MissingBracket(_) => "missing_bracket",
            Error::OrderExceedsDegree { .. } => "order_exceeds_degree",
            Error::Truncation { .. } => "truncation",
            Error::Accuracy { .. } => "accuracy",
            Error::UnsupportedGroup(_) => "unsupported_group",
            Error::Numeric(_) => "numeric",
        }
    }

    /// True for errors caused by the caller's input rather than by numerics.
    pub fn is_input(&self) -> bool {
        matches!(
            self,
            Error::Input(_) | Error::Dimension { .. } | Error::UnsupportedGroup(_)
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "error": self.kind(), "message": self.to_string() })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
