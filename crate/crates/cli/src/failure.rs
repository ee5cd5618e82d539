//! Exit-code classification.

use snex_core::assoc::RuleError;
use snex_core::corpus::CorpusError;
use snex_core::network::{ExtractionError, GraphIoError};

pub const USAGE: u8 = 2;
pub const IO: u8 = 3;
pub const DATA: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Failure {
        Failure { code: USAGE, error: anyhow::anyhow!(msg.into()) }
    }

    pub fn io(error: impl Into<anyhow::Error>) -> Failure {
        Failure { code: IO, error: error.into() }
    }

    pub fn data(error: impl Into<anyhow::Error>) -> Failure {
        Failure { code: DATA, error: error.into() }
    }

    pub fn context(self, ctx: impl std::fmt::Display + Send + Sync + 'static) -> Failure {
        Failure { code: self.code, error: self.error.context(ctx) }
    }
}

impl From<CorpusError> for Failure {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::Io { .. } => Failure::io(e),
            _ => Failure::data(e),
        }
    }
}

impl From<GraphIoError> for Failure {
    fn from(e: GraphIoError) -> Self {
        match e {
            GraphIoError::Io { .. } => Failure::io(e),
            GraphIoError::UnknownFormat(_) => Failure { code: USAGE, error: e.into() },
            _ => Failure::data(e),
        }
    }
}

impl From<RuleError> for Failure {
    fn from(e: RuleError) -> Self {
        match e {
            RuleError::Io { .. } => Failure::io(e),
            _ => Failure::data(e),
        }
    }
}

impl From<ExtractionError> for Failure {
    fn from(e: ExtractionError) -> Self {
        match e {
            ExtractionError::NoActors | ExtractionError::MissingRecords(_) | ExtractionError::Config(_) => {
                Failure { code: USAGE, error: e.into() }
            }
            _ => Failure::data(e),
        }
    }
}
