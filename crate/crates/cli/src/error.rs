use std::path::PathBuf;

use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] speclimit::Error),

    #[error("cannot read config {}: {source}", path.display())]
    ConfigRead { path: PathBuf, source: std::io::Error },

    #[error("config requests analysis `{config}` but the command is `{command}`")]
    AnalysisMismatch { config: &'static str, command: &'static str },

    #[error("cannot write {}: {source}", path.display())]
    Output { path: PathBuf, source: std::io::Error },

    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_config_error() => 2,
            CliError::ConfigRead { .. } | CliError::AnalysisMismatch { .. } => 2,
            _ => 3,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::ConfigRead { .. } => "config_unreadable",
            CliError::AnalysisMismatch { .. } => "analysis_mismatch",
            CliError::Output { .. } => "output_io",
            CliError::Internal(_) => "internal",
        }
    }

    /// One-line JSON for stderr.
    pub fn to_json(&self) -> String {
        let mut v = json!({
            "error": self.code(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        });
        match self {
            CliError::Core(speclimit::Error::Parse { location, .. }) => v["location"] = json!(location),
            CliError::Core(speclimit::Error::InvalidModel { path, .. }) => v["location"] = json!(path),
            _ => {}
        }
        v.to_string()
    }
}
