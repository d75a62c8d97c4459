use deepcore::DepthError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("bad argument: {0}")]
    Usage(String),
    #[error(transparent)]
    Depth(#[from] DepthError),
    #[error("{0} oracle mismatches")]
    Mismatch(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 parse/usage error, 3 dimension mismatch, 4 unresolved degeneracy,
    /// 1 anything else (including check mismatches).
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Usage(_) => 2,
            CliError::Depth(DepthError::DimensionMismatch { .. }) => 3,
            CliError::Depth(DepthError::TooFewPoints { .. } | DepthError::InvalidInput(_)) => 2,
            CliError::Depth(e)
                if matches!(e, DepthError::DegeneracyUnresolved(_)) || e.is_degeneracy() =>
            {
                4
            }
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
