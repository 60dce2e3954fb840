use cm_torus::bounds::BoundError;
use cm_torus::cm::CmError;
use cm_torus::family::FamilyError;
use cm_torus::group::GroupError;
use cm_torus::lattice::{HadamardError, LatticeError};
use cm_torus::torus::TorusError;
use thiserror::Error;

use crate::config::ConfigError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Input(_) => EXIT_CONFIG,
            CliError::Invariant(_) => EXIT_INVARIANT,
            CliError::Resource(_) => EXIT_RESOURCE,
            CliError::Io(_) => 1,
        }
    }

    /// Prefix the message with where the error arose.
    pub fn context(self, ctx: &str) -> Self {
        match self {
            CliError::Config(mut c) => {
                c.message = format!("{ctx}: {}", c.message);
                CliError::Config(c)
            }
            CliError::Input(m) => CliError::Input(format!("{ctx}: {m}")),
            CliError::Invariant(m) => CliError::Invariant(format!("{ctx}: {m}")),
            CliError::Resource(m) => CliError::Resource(format!("{ctx}: {m}")),
            CliError::Io(m) => CliError::Io(format!("{ctx}: {m}")),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::TooLarge(_) => CliError::Resource(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<CmError> for CliError {
    fn from(e: CmError) -> Self {
        match e {
            CmError::Group(g) => g.into(),
            CmError::TooLarge { .. } => CliError::Resource(e.to_string()),
            CmError::ReflexNotCmType(_) => CliError::Invariant(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        CliError::Invariant(e.to_string())
    }
}

impl From<BoundError> for CliError {
    fn from(e: BoundError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<TorusError> for CliError {
    fn from(e: TorusError) -> Self {
        match e {
            TorusError::TooLarge { .. } => CliError::Resource(e.to_string()),
            TorusError::InconsistentIndex(_)
            | TorusError::UnstableTruncation { .. }
            | TorusError::IndexNotTwo { .. } => CliError::Invariant(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::Cm(c) => c.into(),
            FamilyError::Lattice(l) => l.into(),
            FamilyError::RankMismatch { .. } => CliError::Invariant(e.to_string()),
            FamilyError::TooLarge(_) => CliError::Resource(e.to_string()),
            FamilyError::NotOddPrime(_) => CliError::Input(e.to_string()),
        }
    }
}

impl From<HadamardError> for CliError {
    fn from(e: HadamardError) -> Self {
        match e {
            HadamardError::TooLargeForExhaustive(_) => CliError::Resource(e.to_string()),
            HadamardError::DimensionOutOfRange(_) => CliError::Input(e.to_string()),
            HadamardError::BoundViolated { .. } => CliError::Invariant(e.to_string()),
        }
    }
}
