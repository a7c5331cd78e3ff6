use usvp_core::LatticeError;

use crate::format::FormatError;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;
pub const EXIT_CERTIFICATE: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("{0}")]
    Format(#[from] FormatError),
    #[error("{0}")]
    Lattice(#[from] LatticeError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}

impl LabError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Lattice(LatticeError::RankCapExceeded { .. } | LatticeError::Refused(_)) => {
                EXIT_REFUSED
            }
            LabError::Lattice(LatticeError::InvariantBreach(_)) => EXIT_CERTIFICATE,
            LabError::Format(FormatError::Lattice(LatticeError::RankCapExceeded { .. })) => {
                EXIT_REFUSED
            }
            _ => EXIT_INPUT,
        }
    }
}
