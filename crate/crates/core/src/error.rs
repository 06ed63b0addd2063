use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("transfer matrix overflow (|element| = {magnitude:.3e}) at slab {slab}")]
    Overflow { slab: usize, magnitude: f64 },

    #[error("singular transfer matrix: |M22| = {0:.3e}")]
    SingularMatrix(f64),

    #[error("singular boundary-value system at slab {slab}")]
    SingularSystem { slab: usize },

    #[error("at grid point {index} (Δ/Γ = {delta_over_gamma}): {source}")]
    AtGridPoint {
        index: usize,
        delta_over_gamma: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
