use hypervol::{Error, ErrorCategory};
use serde_json::json;

use crate::Format;

#[derive(Debug)]
pub struct CliError {
    kind: String,
    category: ErrorCategory,
    message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self { kind: "input".into(), category: ErrorCategory::Input, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { kind: "io".into(), category: ErrorCategory::Input, message: message.into() }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self { kind: "internal-consistency".into(), category: ErrorCategory::Internal, message: message.into() }
    }

    pub fn exit_code(&self) -> u8 {
        match self.category {
            ErrorCategory::Input => 2,
            ErrorCategory::Degeneracy => 3,
            ErrorCategory::Internal => 4,
        }
    }

    fn category_name(&self) -> &'static str {
        match self.category {
            ErrorCategory::Input => "input",
            ErrorCategory::Degeneracy => "degeneracy",
            ErrorCategory::Internal => "internal",
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json!({
                "error": {
                    "kind": self.kind,
                    "category": self.category_name(),
                    "exit_code": self.exit_code(),
                    "message": self.message,
                }
            })
            .to_string(),
            Format::Text => format!("error ({}): {}", self.kind, self.message),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self { kind: e.kind().into(), category: e.category(), message: e.to_string() }
    }
}
