use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("argument out of supported range: {0}")]
    Range(String),

    /// The deformed annihilation operator needs `J_{n+2}(2α) ≠ 0`.
    #[error("coherent parameter sits on a Bessel root: J_{order}(2α) vanishes (n = {index})")]
    BesselRoot { order: usize, index: usize },

    /// `1 - X₊X₀X₋` (or `1 - X₊X₋`) is zero, so the reordered form does not exist.
    #[error("singular ordering parameters: {0}")]
    SingularParameter(String),

    #[error("logarithm branch undefined: X0 = 0")]
    Branch,

    #[error("amplitude reached the truncation edge (|c_N-1|^2 = {leakage:e}); increase the dimension")]
    TruncationOverflow { leakage: f64 },

    #[error("no closed-form impulse function for input waveguide {input}")]
    UnsupportedOracle { input: usize },

    #[error("numeric failure: {0}")]
    Numeric(String),
}
