use serde_json::json;
use thiserror::Error;

use excon::dsl::{DslError, ElabError};
use excon::nctensor::NcError;

use crate::report::SCHEMA;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error(transparent)]
    Elab(#[from] ElabError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] excon::Error),
}

impl From<NcError> for CliError {
    fn from(e: NcError) -> Self {
        CliError::Library(e.into())
    }
}

impl From<excon::context::ContextError> for CliError {
    fn from(e: excon::context::ContextError) -> Self {
        CliError::Library(e.into())
    }
}

impl From<excon::homological::HomologicalError> for CliError {
    fn from(e: excon::homological::HomologicalError) -> Self {
        CliError::Library(e.into())
    }
}

impl From<excon::field::FieldError> for CliError {
    fn from(e: excon::field::FieldError) -> Self {
        CliError::Library(e.into())
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl CliError {
    /// 1 when the library caught itself in a contradiction, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(excon::Error::Nc(NcError::InternalInconsistency(_)))
            | CliError::Library(excon::Error::Context(excon::context::ContextError::InternalInconsistency(_))) => 1,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "IoError",
            CliError::Dsl(DslError::Syntax { .. }) => "SyntaxError",
            CliError::Dsl(DslError::DuplicateName { .. }) => "DuplicateName",
            CliError::Dsl(DslError::UnresolvedReference { .. }) => "UnresolvedReference",
            CliError::Elab(_) => "ElaborationError",
            CliError::Usage(_) => "UsageError",
            CliError::Library(excon::Error::Nc(NcError::OracleMismatch(_))) => "OracleMismatch",
            CliError::Library(excon::Error::Nc(NcError::InternalInconsistency(_)))
            | CliError::Library(excon::Error::Context(excon::context::ContextError::InternalInconsistency(_))) => {
                "InternalInconsistency"
            }
            CliError::Library(excon::Error::Context(_)) => "ContextError",
            CliError::Library(excon::Error::Field(_)) => "FieldError",
            CliError::Library(_) => "ComputationError",
        }
    }

    pub fn to_json(&self) -> String {
        let mut err = json!({ "kind": self.kind(), "message": self.to_string() });
        match self {
            CliError::Dsl(e) => {
                let (line, col) = e.position();
                err["line"] = line.into();
                err["col"] = col.into();
                if let DslError::Syntax { expected, .. } = e {
                    err["expected"] = expected.clone().into();
                }
            }
            CliError::Elab(e) => {
                err["line"] = e.line.into();
                err["col"] = e.col.into();
                err["decl"] = e.decl.clone().into();
            }
            _ => {}
        }
        serde_json::to_string(&json!({ "schema": SCHEMA, "error": err })).expect("plain data")
    }
}
