use crate::structured_qz::EigenResult;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("inconsistent generator dimensions: {0}")]
    Structural(String),
    #[error("size error: {0}")]
    Size(String),
    #[error("non-finite value at step {step}: {detail}")]
    Numerical { step: usize, detail: String },
    #[error("compression consistency check failed at block {block}: deviation {deviation:.3e}")]
    Consistency { block: usize, deviation: f64 },
    #[error(transparent)]
    Parse(#[from] crate::polyfile::ParseError),
    #[error("no convergence after {sweeps} sweeps; active block {lo}..={hi} remains")]
    NonConvergence {
        sweeps: usize,
        lo: usize,
        hi: usize,
        partial: Box<EigenResult>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
