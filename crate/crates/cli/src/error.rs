use ctqw::CtqwError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Compute(#[from] CtqwError),
}

impl CliError {
    /// 1 validation, 2 numerical check failed, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation(_) => 1,
            Self::Io(_) => 3,
            Self::Compute(e) => match e {
                CtqwError::Io(_) => 3,
                CtqwError::ClosedFormMismatch { .. }
                | CtqwError::TransportNotConverged { .. }
                | CtqwError::QuadratureNotConverged { .. }
                | CtqwError::EigenNotConverged { .. }
                | CtqwError::SingularPade => 2,
                _ => 1,
            },
        }
    }
}

pub fn io_error(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}
