//! Coupling schedules and their digitisation into pulse protocols.
//!
//! Two reference schedules are provided: sin/cos (constant gap ℰ = Ω_M) and
//! linear (gap minimised at the midpoint). Digitisation samples a schedule at
//! `N` levels indexed by ξ ∈ {0, …, N−1}; step ξ of the sin/cos scheme holds
//! (Ω_M sin[ξπ/2(N−1)], Ω_M cos[ξπ/2(N−1)]), the linear scheme uses uniformly
//! spaced levels Ω_M·ξ/(N−1). Step durations are either uniform (t_max/N) or
//! compensated, τ_ξ = π/ℰ(ξ), which maximises per-step transfer.
//!
//! Couplings are evaluated through their mirror symmetry ξ ↔ N−1−ξ, so the
//! swap Ω₁ ↔ Ω₂ under index reversal is exact in floating point, as are the
//! protocol endpoints (0, Ω_M) and (Ω_M, 0).

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::core::{CouplingPair, CouplingRates};
use crate::error::Error;

/// Schedule family for the two couplings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    #[serde(rename = "sincos")]
    SinCos,
    Linear,
}

/// Step-duration policy of a digital protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Timing {
    Uniform,
    Compensated,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::SinCos => write!(f, "sincos"),
            Scheme::Linear => write!(f, "linear"),
        }
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sincos" | "sin-cos" | "sin/cos" => Ok(Scheme::SinCos),
            "linear" => Ok(Scheme::Linear),
            other => Err(format!("unknown scheme '{other}' (expected sincos or linear)")),
        }
    }
}

impl fmt::Display for Timing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Timing::Uniform => write!(f, "uniform"),
            Timing::Compensated => write!(f, "compensated"),
        }
    }
}

impl FromStr for Timing {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(Timing::Uniform),
            "compensated" => Ok(Timing::Compensated),
            other => Err(format!(
                "unknown timing '{other}' (expected uniform or compensated)"
            )),
        }
    }
}

fn check_time_window(t: f64, t_max: f64) -> Result<(), Error> {
    if t_max <= 0.0 || !t_max.is_finite() {
        return Err(Error::NonPositiveTime { t_max });
    }
    if !t.is_finite() || t < 0.0 || t > t_max {
        return Err(Error::TimeOutOfRange { t, t_max });
    }
    Ok(())
}

fn check_omega_max(omega_max: f64) -> Result<(), Error> {
    if omega_max <= 0.0 || !omega_max.is_finite() {
        return Err(Error::NonPositiveOmegaMax { omega_max });
    }
    Ok(())
}

/// Continuous sin/cos schedule: (Ω_M sin(tπ/2t_max), Ω_M cos(tπ/2t_max)).
///
/// The quadratic sum Ω₁² + Ω₂² = Ω_M² holds pointwise, so the gap is
/// constant over the whole schedule.
pub fn sincos_continuous(t: f64, t_max: f64, omega_max: f64) -> Result<CouplingPair, Error> {
    check_time_window(t, t_max)?;
    check_omega_max(omega_max)?;
    let u = t / t_max;
    let (omega1, omega2) = if u <= 0.5 {
        let theta = u * FRAC_PI_2;
        (omega_max * theta.sin(), omega_max * theta.cos())
    } else {
        let theta = (1.0 - u) * FRAC_PI_2;
        (omega_max * theta.cos(), omega_max * theta.sin())
    };
    CouplingPair::new(omega1, omega2)
}

/// Continuous linear schedule: (Ω_M t/t_max, Ω_M (1 − t/t_max)).
pub fn linear_continuous(t: f64, t_max: f64, omega_max: f64) -> Result<CouplingPair, Error> {
    check_time_window(t, t_max)?;
    check_omega_max(omega_max)?;
    let u = t / t_max;
    let (omega1, omega2) = if u <= 0.5 {
        (omega_max * u, omega_max * (1.0 - u))
    } else {
        let v = 1.0 - u;
        (omega_max * (1.0 - v), omega_max * v)
    };
    CouplingPair::new(omega1, omega2)
}

/// Continuous schedule dispatcher.
pub fn continuous_couplings(
    scheme: Scheme,
    t: f64,
    t_max: f64,
    omega_max: f64,
) -> Result<CouplingPair, Error> {
    match scheme {
        Scheme::SinCos => sincos_continuous(t, t_max, omega_max),
        Scheme::Linear => linear_continuous(t, t_max, omega_max),
    }
}

/// Analytic time derivatives of the sin/cos schedule.
pub fn sincos_rates(t: f64, t_max: f64, omega_max: f64) -> Result<CouplingRates, Error> {
    check_time_window(t, t_max)?;
    check_omega_max(omega_max)?;
    let theta = (t / t_max) * FRAC_PI_2;
    let rate = omega_max * FRAC_PI_2 / t_max;
    Ok(CouplingRates {
        d_omega1: rate * theta.cos(),
        d_omega2: -rate * theta.sin(),
    })
}

/// Analytic time derivatives of the linear schedule (constant slopes).
pub fn linear_rates(t: f64, t_max: f64, omega_max: f64) -> Result<CouplingRates, Error> {
    check_time_window(t, t_max)?;
    check_omega_max(omega_max)?;
    let rate = omega_max / t_max;
    Ok(CouplingRates {
        d_omega1: rate,
        d_omega2: -rate,
    })
}

/// Rate dispatcher matching [`continuous_couplings`].
pub fn continuous_rates(
    scheme: Scheme,
    t: f64,
    t_max: f64,
    omega_max: f64,
) -> Result<CouplingRates, Error> {
    match scheme {
        Scheme::SinCos => sincos_rates(t, t_max, omega_max),
        Scheme::Linear => linear_rates(t, t_max, omega_max),
    }
}

/// Digital step index ξ = ⌊N·t/t_max⌋ on the half-open window `[0, t_max)`.
///
/// The result is clamped into `[0, N−1]`; clamping only ever acts on the
/// rounding of `N·t/t_max` for `t` within one ulp of `t_max`.
pub fn step_index(t: f64, n_steps: usize, t_max: f64) -> Result<usize, Error> {
    if n_steps < 3 {
        return Err(Error::TooFewSteps { n_steps, min: 3 });
    }
    if t_max <= 0.0 || !t_max.is_finite() {
        return Err(Error::NonPositiveTime { t_max });
    }
    if !t.is_finite() || t < 0.0 || t >= t_max {
        return Err(Error::TimeOutOfStepRange { t, t_max });
    }
    let xi = (n_steps as f64 * t / t_max).floor() as usize;
    Ok(xi.min(n_steps - 1))
}

fn check_step_args(xi: usize, n_steps: usize, omega_max: f64) -> Result<(), Error> {
    if n_steps < 3 {
        return Err(Error::TooFewSteps { n_steps, min: 3 });
    }
    if xi >= n_steps {
        return Err(Error::StepIndexOutOfRange { xi, n_steps });
    }
    check_omega_max(omega_max)
}

/// Coupling levels of digital step ξ for an `N`-step protocol.
pub fn digital_couplings(
    xi: usize,
    n_steps: usize,
    omega_max: f64,
    scheme: Scheme,
) -> Result<CouplingPair, Error> {
    check_step_args(xi, n_steps, omega_max)?;
    let last = n_steps - 1;
    let mirror = last - xi;
    // Evaluate the lower half of the schedule and reflect, so that
    // ξ → N−1−ξ swaps the two couplings exactly.
    let (omega1, omega2) = match scheme {
        Scheme::SinCos => {
            if xi == mirror {
                // Middle step of an odd-N protocol: sin(π/4) and cos(π/4)
                // round to different floats; use the exact symmetric value.
                let mid = omega_max * std::f64::consts::FRAC_1_SQRT_2;
                (mid, mid)
            } else {
                let lower = xi.min(mirror) as f64 * FRAC_PI_2 / last as f64;
                let (sin, cos) = (lower.sin(), lower.cos());
                if xi < mirror {
                    (omega_max * sin, omega_max * cos)
                } else {
                    (omega_max * cos, omega_max * sin)
                }
            }
        }
        Scheme::Linear => {
            let s = xi.min(mirror) as f64 / last as f64;
            if xi <= mirror {
                (omega_max * s, omega_max * (1.0 - s))
            } else {
                (omega_max * (1.0 - s), omega_max * s)
            }
        }
    };
    CouplingPair::new(omega1, omega2)
}

/// Gap ℰ(ξ) of digital step ξ, in closed form.
///
/// For the sin/cos scheme the gap is the constant Ω_M — exactly, not merely
/// to rounding — because sin² + cos² drops out analytically. For the linear
/// scheme ℰ(ξ) = Ω_M √(s² + (1−s)²) with s = ξ/(N−1), minimised to Ω_M/√2 at
/// the midpoint.
pub fn digital_gap(
    scheme: Scheme,
    xi: usize,
    n_steps: usize,
    omega_max: f64,
) -> Result<f64, Error> {
    check_step_args(xi, n_steps, omega_max)?;
    match scheme {
        Scheme::SinCos => Ok(omega_max),
        Scheme::Linear => {
            let last = n_steps - 1;
            let s = xi.min(last - xi) as f64 / last as f64;
            let r = 1.0 - s;
            Ok(omega_max * (s * s + r * r).sqrt())
        }
    }
}

/// One digital pulse: a coupling pair held for a positive duration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseStep {
    couplings: CouplingPair,
    duration: f64,
    index: usize,
}

impl PulseStep {
    pub fn new(couplings: CouplingPair, duration: f64, index: usize) -> Result<Self, Error> {
        if duration <= 0.0 || !duration.is_finite() {
            return Err(Error::NonPositiveDuration { tau: duration });
        }
        Ok(Self { couplings, duration, index })
    }

    pub fn couplings(&self) -> CouplingPair {
        self.couplings
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn index(&self) -> usize {
        self.index
    }
}

/// An ordered digital pulse sequence with its scheme metadata.
///
/// Protocols built by [`build_protocol`] sample one of the reference
/// schedules; protocols loaded from JSON may carry any coupling levels (the
/// scheme tag is then purely descriptive). Structural invariants are always
/// enforced: at least three steps, indices exactly 0..N−1, positive
/// durations.
#[derive(Debug, Clone, PartialEq)]
pub struct Protocol {
    scheme: Scheme,
    timing: Timing,
    omega_max: f64,
    steps: Vec<PulseStep>,
    total_time: f64,
}

impl Protocol {
    /// Assemble a protocol from explicit steps, validating the structural
    /// invariants.
    pub fn from_steps(
        scheme: Scheme,
        timing: Timing,
        omega_max: f64,
        steps: Vec<PulseStep>,
    ) -> Result<Self, Error> {
        check_omega_max(omega_max)?;
        if steps.len() < 3 {
            return Err(Error::TooFewSteps { n_steps: steps.len(), min: 3 });
        }
        if steps.iter().enumerate().any(|(i, s)| s.index != i) {
            return Err(Error::BadStepIndexing);
        }
        let total_time = steps.iter().map(PulseStep::duration).sum();
        Ok(Self { scheme, timing, omega_max, steps, total_time })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn timing(&self) -> Timing {
        self.timing
    }

    pub fn omega_max(&self) -> f64 {
        self.omega_max
    }

    pub fn n_steps(&self) -> usize {
        self.steps.len()
    }

    pub fn steps(&self) -> &[PulseStep] {
        &self.steps
    }

    /// Σ τ_ξ over all steps.
    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    /// The same pulse sequence run backwards in time (indices relabelled).
    pub fn reversed(&self) -> Self {
        let steps = self
            .steps
            .iter()
            .rev()
            .enumerate()
            .map(|(i, s)| PulseStep { couplings: s.couplings, duration: s.duration, index: i })
            .collect();
        Self {
            scheme: self.scheme,
            timing: self.timing,
            omega_max: self.omega_max,
            steps,
            total_time: self.total_time,
        }
    }

    /// Scale every duration by the same factor so the total time becomes
    /// `total_time`. Relative step lengths — the timing pattern — are kept.
    pub fn rescaled_to(&self, total_time: f64) -> Result<Self, Error> {
        if total_time <= 0.0 || !total_time.is_finite() {
            return Err(Error::NonPositiveTime { t_max: total_time });
        }
        let factor = total_time / self.total_time;
        let steps: Vec<PulseStep> = self
            .steps
            .iter()
            .map(|s| PulseStep {
                couplings: s.couplings,
                duration: s.duration * factor,
                index: s.index,
            })
            .collect();
        let total_time = steps.iter().map(PulseStep::duration).sum();
        Ok(Self {
            scheme: self.scheme,
            timing: self.timing,
            omega_max: self.omega_max,
            steps,
            total_time,
        })
    }
}

/// Build an `N`-step digital protocol for the given schedule family.
///
/// With [`Timing::Uniform`] every step lasts `t_max/N`. With
/// [`Timing::Compensated`] step ξ lasts τ_ξ = π/ℰ(ξ) — `t_max` is ignored
/// and the total time is an output, Σ τ_ξ. For the sin/cos scheme the gap is
/// constant, so compensated timing coincides with uniform timing at
/// t_max = Nπ/Ω_M.
pub fn build_protocol(
    scheme: Scheme,
    n_steps: usize,
    t_max: f64,
    omega_max: f64,
    timing: Timing,
) -> Result<Protocol, Error> {
    if n_steps < 3 {
        return Err(Error::TooFewSteps { n_steps, min: 3 });
    }
    check_omega_max(omega_max)?;
    if timing == Timing::Uniform && (t_max <= 0.0 || !t_max.is_finite()) {
        return Err(Error::NonPositiveTime { t_max });
    }
    let mut steps = Vec::with_capacity(n_steps);
    for xi in 0..n_steps {
        let couplings = digital_couplings(xi, n_steps, omega_max, scheme)?;
        let duration = match timing {
            Timing::Uniform => t_max / n_steps as f64,
            Timing::Compensated => PI / digital_gap(scheme, xi, n_steps, omega_max)?,
        };
        steps.push(PulseStep::new(couplings, duration, xi)?);
    }
    Protocol::from_steps(scheme, timing, omega_max, steps)
}

// Wire format: {scheme, timing, N, omega_max, steps: [{xi, omega1, omega2, tau}]}.

#[derive(Serialize, Deserialize)]
struct StepWire {
    xi: usize,
    omega1: f64,
    omega2: f64,
    tau: f64,
}

#[derive(Serialize, Deserialize)]
struct ProtocolWire {
    scheme: Scheme,
    timing: Timing,
    #[serde(rename = "N")]
    n_steps: usize,
    omega_max: f64,
    steps: Vec<StepWire>,
}

impl Serialize for Protocol {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let wire = ProtocolWire {
            scheme: self.scheme,
            timing: self.timing,
            n_steps: self.n_steps(),
            omega_max: self.omega_max,
            steps: self
                .steps
                .iter()
                .map(|s| StepWire {
                    xi: s.index,
                    omega1: s.couplings.omega1(),
                    omega2: s.couplings.omega2(),
                    tau: s.duration,
                })
                .collect(),
        };
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Protocol {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = ProtocolWire::deserialize(deserializer)?;
        if wire.steps.len() != wire.n_steps {
            return Err(D::Error::custom(format!(
                "protocol declares N = {} but carries {} steps",
                wire.n_steps,
                wire.steps.len()
            )));
        }
        let steps = wire
            .steps
            .into_iter()
            .map(|s| {
                let couplings =
                    CouplingPair::new(s.omega1, s.omega2).map_err(D::Error::custom)?;
                PulseStep::new(couplings, s.tau, s.xi).map_err(D::Error::custom)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Protocol::from_steps(wire.scheme, wire.timing, wire.omega_max, steps)
            .map_err(D::Error::custom)
    }
}
