use thiserror::Error;

/// Errors produced by the forward model and the estimation routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An input left the model's validity range (bad permittivity, drag
    /// formula out of range, empty sweep, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The instrument has ε₁ = ε₂: the first-order signal vanishes
    /// identically and carries no velocity information.
    #[error("degenerate instrument: {0}")]
    DegenerateInstrument(String),

    /// A fit was requested on data that cannot constrain it.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// The refiner exhausted its iteration budget while still improving.
    #[error("no convergence after {iterations} iterations (gradient norm {gradient_norm:.3e})")]
    NonConvergence {
        iterations: usize,
        gradient_norm: f64,
    },

    /// A regression table without two usable rows.
    #[error("degenerate table: {0}")]
    DegenerateTable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
