use thiserror::Error;

use crate::exactlin::LinError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Lin(#[from] LinError),
    #[error("backend mismatch: `{0}` vs `{1}`")]
    BackendMismatch(String, String),
    #[error("invalid backend: {0}")]
    InvalidBackend(String),
    #[error("invalid object: {0}")]
    InvalidObject(String),
    #[error("not an intertwiner: {0}")]
    NotIntertwiner(String),
    #[error("not a subobject: {0}")]
    NotSubobject(String),
    #[error("cannot compose: {0}")]
    ComposeError(String),
    #[error("not a two-sided Serre tensor-ideal: {0}")]
    NotTensorIdeal(String),
    #[error("backend contract violated: {0}")]
    BackendContract(String),
    #[error("requirement unmet: {0}")]
    RequirementUnmet(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("unknown simple label `{0}`")]
    UnknownLabel(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
