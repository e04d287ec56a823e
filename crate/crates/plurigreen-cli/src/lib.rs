//! Standard-library companion to `plurigreen`: domain-spec files, complex
//! argument parsing, JSON/CSV reports, worker-pool scans and the reproducible
//! verification suites. The binary in this crate is a thin wrapper over these
//! modules so integration tests drive the same code paths.

pub mod domainfile;
pub mod par;
pub mod report;
pub mod verify;

use std::path::PathBuf;

use plurigreen::SearchBudget;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Full run configuration; identical configuration and inputs produce
/// byte-identical primary outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub budget: SearchBudget,
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            budget: SearchBudget::default(),
            workers: 1,
            out: None,
            format: OutputFormat::Json,
        }
    }
}

/// Process exit codes shared by the binary and the tests.
pub mod exit_codes {
    pub const OK: u8 = 0;
    pub const INPUT: u8 = 2;
    pub const SOUNDNESS: u8 = 3;
    pub const INFEASIBLE: u8 = 4;
}

/// Maps library errors onto the documented exit codes.
pub fn exit_code_for(err: &plurigreen::Error) -> u8 {
    use plurigreen::Error;
    match err {
        Error::SoundnessViolation { .. } => exit_codes::SOUNDNESS,
        Error::Infeasible(_) | Error::Quadrature(_) | Error::RootsInconclusive(_) => {
            exit_codes::INFEASIBLE
        }
        Error::DimensionMismatch { .. }
        | Error::OutsideDomain { .. }
        | Error::InvalidParameter(_)
        | Error::Unsupported(_) => exit_codes::INPUT,
    }
}
