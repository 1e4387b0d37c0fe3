use lcanon_core::Error as CoreError;

/// CLI failure with the exit-code contract: 1 for input/validation problems,
/// 2 for numerical or mathematical failures.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Math(String),
}

impl CliError {
    pub fn from_core(e: CoreError) -> Self {
        match e {
            CoreError::DimensionMismatch(_)
            | CoreError::InvalidArgument(_)
            | CoreError::Precondition(_) => CliError::Input(e.to_string()),
            CoreError::NotCompletelyPositive { .. }
            | CoreError::NotCpGenerator { .. }
            | CoreError::InconsistentGenerator { .. }
            | CoreError::NumericalFailure(_) => CliError::Math(e.to_string()),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Math(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Math(m) => m,
        }
    }
}
