use thiserror::Error;

/// Errors for invalid inputs to scheme generators, propagators, and analytics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("couplings must be finite and non-negative, got ({omega1}, {omega2})")]
    InvalidCoupling { omega1: f64, omega2: f64 },

    /// The eigenbasis is not unique when both couplings vanish.
    #[error("eigensystem is undefined for zero couplings")]
    DegenerateCouplings,

    #[error("time {t} lies outside [0, {t_max}]")]
    TimeOutOfRange { t: f64, t_max: f64 },

    /// Step lookup works on the half-open interval `[0, t_max)`.
    #[error("time {t} lies outside [0, {t_max})")]
    TimeOutOfStepRange { t: f64, t_max: f64 },

    #[error("step index {xi} out of range for {n_steps} steps")]
    StepIndexOutOfRange { xi: usize, n_steps: usize },

    #[error("steps must be >= {min}, got {n_steps}")]
    TooFewSteps { n_steps: usize, min: usize },

    #[error("total time must be positive, got {t_max}")]
    NonPositiveTime { t_max: f64 },

    #[error("omega_max must be positive, got {omega_max}")]
    NonPositiveOmegaMax { omega_max: f64 },

    #[error("step duration must be positive, got {tau}")]
    NonPositiveDuration { tau: f64 },

    #[error("step duration must be non-negative, got {tau}")]
    NegativeDuration { tau: f64 },

    #[error("state vector has squared norm {norm_sq}, expected 1")]
    UnnormalizedState { norm_sq: f64 },

    #[error("samples_per_step must be >= 1")]
    NoSamples,

    #[error("resolution must be >= 2 points, got {points}")]
    BadResolution { points: usize },

    #[error("resonance order n_max must be >= 1")]
    BadResonanceOrder,

    #[error("protocol steps must carry indices 0..N-1 in increasing order")]
    BadStepIndexing,

    #[error("N range is empty: n_min {n_min} > n_max {n_max}")]
    EmptyRange { n_min: usize, n_max: usize },
}
