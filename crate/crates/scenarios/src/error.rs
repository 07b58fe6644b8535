use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] curvtherm::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl ScenarioError {
    /// Process exit status: 1 for configuration and input problems, 2 for
    /// numeric or convergence failures.
    pub fn exit_code(&self) -> i32 {
        use curvtherm::Error as E;
        match self {
            ScenarioError::Core(E::Numeric(_) | E::Convergence(_)) => 2,
            _ => 1,
        }
    }
}

pub type ScenarioResult<T> = Result<T, ScenarioError>;
