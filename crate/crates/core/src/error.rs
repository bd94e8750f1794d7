use thiserror::Error;

/// Errors produced by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("coherent state truncated too early: discarded probability {mass:.3e} exceeds 1e-6")]
    TailTooHeavy { mass: f64 },

    #[error("operator is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("Bessel J_{n}({x}) requested outside the supported envelope |n| <= 200, 0 <= x <= 50")]
    OutOfEnvelope { n: i32, x: f64 },

    #[error("sideband index m0 is zero; no zero point exists on this branch")]
    M0Zero,

    #[error("negative radicand in critical coupling: (omega_c + delta) * omega_c = {value:.6e}")]
    NegativeRadicand { value: f64 },

    #[error("ground-state minimizer sits at the candidate cutoff n = {n_max}; raise n_max")]
    CutoffSuspect { n_max: u32 },

    #[error("time step not converged: halving still changes amplitudes by {deviation:.3e} (> {tolerance:.1e}) after {halvings} halvings")]
    StepTooLarge {
        deviation: f64,
        tolerance: f64,
        halvings: u32,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
