use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("Cartan matrix is not of finite type; offending principal submatrix on indices {indices:?}: {submatrix:?}")]
    NotFiniteType { indices: Vec<usize>, submatrix: Vec<Vec<i64>> },
    #[error("backend mismatch: {0}")]
    Backend(String),
    #[error("element is not invertible in the localization: {0}")]
    NotInvertible(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("expression error: {0}")]
    Expr(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
