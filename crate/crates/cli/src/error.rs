use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Library(#[from] bogo_gas::Error),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Csv(#[from] csv::Error),

    #[error("{failed} verification check(s) failed")]
    Verification { failed: usize },
}

impl<W> From<csv::IntoInnerError<W>> for CliError {
    fn from(e: csv::IntoInnerError<W>) -> Self {
        CliError::Io(e.into_error())
    }
}

impl From<std::string::FromUtf8Error> for CliError {
    fn from(e: std::string::FromUtf8Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl CliError {
    /// Invalid input exits with 2, everything else with 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Library(bogo_gas::Error::Input(_)) => 2,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Library(e) => e.kind(),
            CliError::Io(_) => "io",
            CliError::Csv(_) => "csv",
            CliError::Verification { .. } => "verification",
        }
    }

    pub fn record(&self) -> String {
        let v = json!({
            "schema_version": crate::output::SCHEMA_VERSION,
            "error": {"kind": self.kind(), "message": self.to_string(), "exit_code": self.exit_code()},
        });
        crate::output::to_json(&v)
    }
}
