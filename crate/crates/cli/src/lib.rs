//! IO companion for the fuzzy Kumaraswamy estimators: data file formats,
//! JSON result records, pretty study tables, and a multi-worker study runner
//! whose output is bit-identical to the sequential one.

pub mod formats;
pub mod output;
pub mod runner;

/// Errors surfaced by the command-line layer, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or invalid input (exit code 1).
    Input(String),
    /// Estimation failed to converge (exit code 2).
    NonConvergence(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::NonConvergence(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::NonConvergence(m) => m,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.message())
    }
}

impl std::error::Error for CliError {}

impl From<fuzzykuma_core::Error> for CliError {
    fn from(e: fuzzykuma_core::Error) -> Self {
        use fuzzykuma_core::Error as E;
        match e {
            E::SingularHessian { .. }
            | E::NotConverged
            | E::NotPositiveDefinite
            | E::OptimizerFailed(_) => CliError::NonConvergence(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
