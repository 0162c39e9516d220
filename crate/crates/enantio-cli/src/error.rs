//! Error classes and their exit codes.

use serde_json::{json, Value};

/// Problems found while checking a spec against its schema.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub missing: Vec<String>,
    pub unknown: Vec<String>,
    /// `(key, message)` pairs.
    pub invalid: Vec<(String, String)>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.unknown.is_empty() && self.invalid.is_empty()
    }

    pub fn invalid(key: &str, message: impl Into<String>) -> Self {
        Self { invalid: vec![(key.to_string(), message.into())], ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CliError {
    /// Bad input; exit code 1.
    Validation(ValidationReport),
    /// Failure during computation or output; exit code 2.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation(_) => 1,
            Self::Runtime(_) => 2,
        }
    }

    /// Machine-readable form printed on stderr.
    pub fn to_json(&self) -> Value {
        match self {
            Self::Validation(r) => json!({
                "error": "validation",
                "missing": r.missing,
                "unknown": r.unknown,
                "invalid": r.invalid.iter().map(|(k, m)| json!({"key": k, "message": m})).collect::<Vec<_>>(),
            }),
            Self::Runtime(m) => json!({"error": "runtime", "message": m}),
        }
    }

    pub fn runtime(message: impl std::fmt::Display) -> Self {
        Self::Runtime(message.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

impl std::error::Error for CliError {}

impl From<enantio::Error> for CliError {
    fn from(e: enantio::Error) -> Self {
        match e {
            enantio::Error::InvalidArgument(m) | enantio::Error::Core(enantio::nhq_core::Error::InvalidArgument(m)) => {
                Self::Validation(ValidationReport::invalid("parameters", m))
            }
            other => Self::Runtime(other.to_string()),
        }
    }
}

impl From<enantio::nhq_core::Error> for CliError {
    fn from(e: enantio::nhq_core::Error) -> Self {
        enantio::Error::from(e).into()
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Runtime(format!("i/o: {e}"))
    }
}
