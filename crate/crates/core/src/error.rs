use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("mesh generation failed at generator {generator}: {reason}")]
    Generation { generator: usize, reason: String },

    #[error("parse error at line {line}, {field}: {reason}")]
    Parse {
        line: usize,
        field: String,
        reason: String,
    },

    #[error("mesh validation failed: {0}")]
    Validation(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("element {element}: {reason}")]
    Element { element: usize, reason: String },

    #[error("assembly error on edge ({0}, {1}): {2}")]
    Assembly(usize, usize, String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("matrix is not positive semidefinite: {0}")]
    NotPsd(String),

    #[error("coercivity failure: {0}")]
    Coercivity(String),

    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerical pipeline (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Geometry(_)
                | Error::Element { .. }
                | Error::Assembly(..)
                | Error::NotPsd(_)
                | Error::Coercivity(_)
                | Error::NoConvergence(_)
                | Error::Generation { .. }
        )
    }
}
