use thiserror::Error;

/// Errors raised by the risk engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RiskError {
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),
    #[error("shape set is empty")]
    EmptyShapeSet,
    #[error("{field}: {message}")]
    Validation { field: String, message: String },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("unknown composition `{0}`")]
    UnknownComposition(String),
}

impl RiskError {
    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        RiskError::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Prefixes the field path of a validation error, leaving other variants untouched.
    pub fn at(self, prefix: &str) -> Self {
        match self {
            RiskError::Validation { field, message } => {
                let field = if field.is_empty() {
                    prefix.to_string()
                } else if field.starts_with('[') {
                    format!("{prefix}{field}")
                } else {
                    format!("{prefix}.{field}")
                };
                RiskError::Validation { field, message }
            }
            other => other,
        }
    }
}

pub type Result<T, E = RiskError> = std::result::Result<T, E>;
