use thiserror::Error;

use crate::intlinalg::LinAlgError;
use crate::kgraph::KGraphError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] KGraphError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error("a {degree}-cochain needs {expected} values, got {found}")]
    DegreeMismatch { degree: usize, expected: usize, found: usize },
    #[error("the crossed product was not built from the identity automorphism")]
    BetaNotIdentity,
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("class is not fixed by the automorphism: β*ψ - ψ is not a coboundary")]
    ClassNotInvariant,
    #[error("invalid coefficient group `{0}`")]
    InvalidCoefficients(String),
    #[error("invalid phase `{0}`")]
    InvalidPhase(String),
    #[error("{0}")]
    Input(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Graph(e) => e.kind(),
            Error::LinAlg(_) => "LinAlg",
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::BetaNotIdentity => "BetaNotIdentity",
            Error::NotACocycle => "NotACocycle",
            Error::ClassNotInvariant => "ClassNotInvariant",
            Error::InvalidCoefficients(_) => "InvalidCoefficients",
            Error::InvalidPhase(_) => "InvalidPhase",
            Error::Input(_) => "Input",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
