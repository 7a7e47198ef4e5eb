//! Digital adiabatic passage (DAP) in three-state systems.
//!
//! A three-site chain `|1⟩ — Ω₁ — |2⟩ — Ω₂ — |3⟩` is driven by tunnel matrix
//! elements that change in discrete steps rather than smoothly. Because the
//! Hamiltonian is piecewise constant, every step propagator has a closed form
//! and protocols can be evaluated exactly — no integrator, no time-step error.
//!
//! The crate is organised around that fact:
//!
//! - [`core`]: coupling pairs, the tridiagonal Hamiltonian, and its analytic
//!   eigensystem (dark state included).
//! - [`schemes`]: continuous sin/cos and linear coupling schedules, their
//!   digitisation into `N` steps, and protocol construction with uniform or
//!   gap-compensated step durations.
//! - [`propagator`]: the closed-form step unitary, an independent
//!   matrix-exponential oracle, protocol composition, and exact trajectories.
//! - [`analysis`]: adiabaticity parameters, dark-state overlap errors, and
//!   identity-resonance prediction.
//! - [`experiments`]: deterministic sweep harness producing fidelity curves,
//!   (N, t_max) error grids, and error-vs-N comparisons.
//!
//! Units: the maximum coupling Ω_M sets the scale; times are in units of
//! 1/Ω_M and are most naturally quoted as multiples of π/Ω_M.

pub mod analysis;
pub mod core;
mod error;
pub mod experiments;
pub mod propagator;
pub mod schemes;

pub use crate::core::{CouplingPair, CouplingRates, EigenSystem, StateVector};
pub use crate::error::Error;
pub use crate::propagator::{Trajectory, Unitary3};
pub use crate::schemes::{Protocol, PulseStep, Scheme, Timing};
