//! Domain types for the three-state chain and its analytic eigensystem.
//!
//! Basis ordering is fixed as (|1⟩, |2⟩, |3⟩) everywhere; index 0 of any
//! vector or matrix refers to |1⟩. Couplings are real and non-negative, so
//! the Hamiltonian is real symmetric and the eigenvectors can be written in
//! closed form with a fixed sign convention: the dark state carries +Ω₂ on
//! |1⟩ and −Ω₁ on |3⟩.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::Error;

/// The two tunnel matrix elements (Ω₁, Ω₂) at one instant or digital step.
///
/// Ω₁ couples |1⟩↔|2⟩ and Ω₂ couples |2⟩↔|3⟩, both in units of the maximum
/// coupling Ω_M. Components are finite and non-negative by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingPair {
    omega1: f64,
    omega2: f64,
}

impl CouplingPair {
    pub fn new(omega1: f64, omega2: f64) -> Result<Self, Error> {
        if !omega1.is_finite() || !omega2.is_finite() || omega1 < 0.0 || omega2 < 0.0 {
            return Err(Error::InvalidCoupling { omega1, omega2 });
        }
        Ok(Self { omega1, omega2 })
    }

    pub fn omega1(&self) -> f64 {
        self.omega1
    }

    pub fn omega2(&self) -> f64 {
        self.omega2
    }

    /// Gap ℰ = √(Ω₁² + Ω₂²) between the dark state and either bright state.
    pub fn energy_gap(&self) -> f64 {
        self.omega1.hypot(self.omega2)
    }

    /// Both couplings zero: the Hamiltonian vanishes and the eigenbasis is
    /// not unique.
    pub fn is_degenerate(&self) -> bool {
        self.omega1 == 0.0 && self.omega2 == 0.0
    }

    /// Exchange Ω₁ ↔ Ω₂ (the coupling pattern of the time-reversed schedule).
    pub fn swapped(&self) -> Self {
        Self { omega1: self.omega2, omega2: self.omega1 }
    }
}

/// Time derivatives (dΩ₁/dt, dΩ₂/dt) of a coupling schedule.
///
/// Unlike [`CouplingPair`], components may be negative: every transfer
/// schedule ramps one coupling down while the other ramps up.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingRates {
    pub d_omega1: f64,
    pub d_omega2: f64,
}

/// Closed-form eigensystem of the three-state Hamiltonian.
///
/// Eigenvalues are ±ℰ and 0; eigenvectors are real with the sign convention
/// D± = (Ω₁, ±ℰ, Ω₂)/√(2ℰ²) and D₀ = (Ω₂, 0, −Ω₁)/ℰ.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub energy_gap: f64,
    pub e_plus: f64,
    pub e_zero: f64,
    pub e_minus: f64,
    pub d_plus: Vector3<f64>,
    pub d_zero: Vector3<f64>,
    pub d_minus: Vector3<f64>,
}

/// A normalized complex state on (|1⟩, |2⟩, |3⟩).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    amplitudes: Vector3<Complex64>,
}

impl StateVector {
    /// Tolerance on |‖ψ‖² − 1| accepted at construction and after
    /// propagation.
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(a1: Complex64, a2: Complex64, a3: Complex64) -> Result<Self, Error> {
        Self::from_vector(Vector3::new(a1, a2, a3))
    }

    pub fn from_vector(amplitudes: Vector3<Complex64>) -> Result<Self, Error> {
        let norm_sq = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::UnnormalizedState { norm_sq });
        }
        Ok(Self { amplitudes })
    }

    /// Real unit vector promoted to a state (used for eigenvectors).
    pub fn from_real(v: Vector3<f64>) -> Result<Self, Error> {
        Self::from_vector(v.map(|x| Complex64::new(x, 0.0)))
    }

    /// Basis state; `basis(0)` is |1⟩, `basis(2)` is |3⟩.
    pub fn basis(index: usize) -> Self {
        assert!(index < 3, "basis index must be 0, 1, or 2");
        let mut amplitudes = Vector3::zeros();
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    /// Internal constructor for vectors already unit-norm by unitarity.
    pub(crate) fn from_unit_unchecked(amplitudes: Vector3<Complex64>) -> Self {
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &Vector3<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    /// Populations (P₁, P₂, P₃) = |⟨i|ψ⟩|².
    pub fn populations(&self) -> [f64; 3] {
        [
            self.amplitudes[0].norm_sqr(),
            self.amplitudes[1].norm_sqr(),
            self.amplitudes[2].norm_sqr(),
        ]
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Real symmetric Hamiltonian of the chain: Ω₁ on the (1,2) bond and Ω₂ on
/// the (2,3) bond, all diagonal entries zero (degenerate site energies,
/// ħ = 1).
pub fn hamiltonian(c: CouplingPair) -> Matrix3<f64> {
    Matrix3::new(
        0.0,
        c.omega1(),
        0.0,
        c.omega1(),
        0.0,
        c.omega2(),
        0.0,
        c.omega2(),
        0.0,
    )
}

/// Analytic eigensystem of [`hamiltonian`].
///
/// Fails with [`Error::DegenerateCouplings`] when both couplings are zero.
pub fn eigensystem(c: CouplingPair) -> Result<EigenSystem, Error> {
    if c.is_degenerate() {
        return Err(Error::DegenerateCouplings);
    }
    let gap = c.energy_gap();
    let norm_pm = std::f64::consts::SQRT_2 * gap;
    let (o1, o2) = (c.omega1(), c.omega2());
    Ok(EigenSystem {
        energy_gap: gap,
        e_plus: gap,
        e_zero: 0.0,
        e_minus: -gap,
        d_plus: Vector3::new(o1 / norm_pm, gap / norm_pm, o2 / norm_pm),
        d_zero: Vector3::new(o2 / gap, 0.0, -o1 / gap),
        d_minus: Vector3::new(o1 / norm_pm, -gap / norm_pm, o2 / norm_pm),
    })
}

/// The zero-energy dark state D₀ = (Ω₂|1⟩ − Ω₁|3⟩)/ℰ: no amplitude on |2⟩,
/// the transport channel of adiabatic passage.
pub fn dark_state(c: CouplingPair) -> Result<StateVector, Error> {
    let eigen = eigensystem(c)?;
    StateVector::from_real(eigen.d_zero)
}
