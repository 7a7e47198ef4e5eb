//! Deterministic sweep harness: time series, t_max sweeps, (N, t_max)
//! grids, and error-vs-N comparisons.
//!
//! Grid cells are independent pure evaluations and run in parallel; results
//! are assembled in axis order regardless of completion order, so outputs
//! are bit-identical across runs and thread counts. Nothing here draws
//! random numbers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::total_error_estimate;
use crate::core::StateVector;
use crate::error::Error;
use crate::propagator::{evolve_trajectory, transfer_fidelity, Trajectory};
use crate::schemes::{build_protocol, Protocol, Scheme, Timing};

/// One named sweep axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

/// Whether the payload stores transfer fidelity or transport error 1 − F.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PayloadKind {
    Fidelity,
    Error,
}

/// Provenance attached to a sweep. `timestamp` stays unset in normal
/// operation: outputs must be byte-identical across reruns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub scheme: Scheme,
    pub timing: Timing,
    pub omega_max: f64,
    /// Always true: every cell is a pure function of the flags.
    pub deterministic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    /// Command-line echo, when produced by the CLI.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
}

impl SweepMetadata {
    fn new(scheme: Scheme, timing: Timing, omega_max: f64) -> Self {
        Self {
            scheme,
            timing,
            omega_max,
            deterministic: true,
            timestamp: None,
            command: None,
        }
    }
}

/// A sweep outcome: row-major payload over the axes (first axis outermost),
/// optionally with an overlay column aligned to the first axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axes: Vec<Axis>,
    pub payload: Vec<f64>,
    pub payload_kind: PayloadKind,
    pub metadata: SweepMetadata,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overlay: Option<Axis>,
}

/// One flattened grid cell, in CSV column order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub n_steps: f64,
    pub t_max: f64,
    pub fidelity: f64,
    pub error: f64,
    pub overlay: Option<f64>,
}

impl SweepResult {
    /// Dimension and range checks; loaded results should pass through here.
    pub fn validate(&self) -> Result<(), Error> {
        let cells: usize = self.axes.iter().map(|a| a.values.len()).product();
        if cells != self.payload.len() || self.axes.len() != 2 {
            return Err(Error::BadResolution { points: self.payload.len() });
        }
        if let Some(overlay) = &self.overlay {
            if overlay.values.len() != self.axes[0].values.len() {
                return Err(Error::BadResolution { points: overlay.values.len() });
            }
        }
        if self.payload.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::BadResolution { points: self.payload.len() });
        }
        Ok(())
    }

    /// Iterate cells in row-major axis order as (N, t_max, fidelity, error)
    /// rows.
    pub fn rows(&self) -> impl Iterator<Item = SweepRow> + '_ {
        let inner = self.axes[1].values.len();
        self.payload.iter().enumerate().map(move |(idx, &value)| {
            let (i, j) = (idx / inner, idx % inner);
            let fidelity = match self.payload_kind {
                PayloadKind::Fidelity => value,
                PayloadKind::Error => 1.0 - value,
            };
            SweepRow {
                n_steps: self.axes[0].values[i],
                t_max: self.axes[1].values[j],
                fidelity,
                error: 1.0 - fidelity,
                overlay: self.overlay.as_ref().map(|o| o.values[i]),
            }
        })
    }
}

fn check_points(points: usize) -> Result<(), Error> {
    if points < 2 {
        return Err(Error::BadResolution { points });
    }
    Ok(())
}

fn check_n_range(n_range: (usize, usize)) -> Result<(), Error> {
    let (n_min, n_max) = n_range;
    if n_min > n_max {
        return Err(Error::EmptyRange { n_min, n_max });
    }
    if n_min < 3 {
        return Err(Error::TooFewSteps { n_steps: n_min, min: 3 });
    }
    Ok(())
}

/// Grid over the half-open interval (lo, hi]: `points` values ending
/// exactly at `hi`.
fn time_grid(t_range: (f64, f64), points: usize) -> Result<Vec<f64>, Error> {
    let (lo, hi) = t_range;
    if !hi.is_finite() || !lo.is_finite() || lo < 0.0 || hi <= lo {
        return Err(Error::NonPositiveTime { t_max: hi });
    }
    Ok((1..=points)
        .map(|k| lo + k as f64 * (hi - lo) / points as f64)
        .collect())
}

/// Build the protocol evaluated at one sweep cell. Uniform timing takes
/// `t_max` directly; compensated timing keeps the π/ℰ(ξ) pattern and
/// rescales it so the total time equals `t_max`.
fn cell_protocol(
    scheme: Scheme,
    timing: Timing,
    n_steps: usize,
    t_max: f64,
    omega_max: f64,
) -> Result<Protocol, Error> {
    match timing {
        Timing::Uniform => build_protocol(scheme, n_steps, t_max, omega_max, timing),
        Timing::Compensated => {
            build_protocol(scheme, n_steps, 0.0, omega_max, timing)?.rescaled_to(t_max)
        }
    }
}

/// Evolve |1⟩ through one protocol and return the sampled trajectory.
///
/// `t_max` is ignored for compensated timing, whose total time is the
/// protocol's own Σ π/ℰ(ξ).
pub fn timeseries_experiment(
    scheme: Scheme,
    timing: Timing,
    n_steps: usize,
    t_max: f64,
    omega_max: f64,
    samples_per_step: usize,
) -> Result<Trajectory, Error> {
    let protocol = build_protocol(scheme, n_steps, t_max, omega_max, timing)?;
    evolve_trajectory(&protocol, &StateVector::basis(0), samples_per_step)
}

/// Final-state fidelity as a function of total protocol time, on the grid
/// (t_lo, t_hi] with `points` cells.
pub fn sweep_tmax(
    scheme: Scheme,
    timing: Timing,
    n_steps: usize,
    t_range: (f64, f64),
    points: usize,
    omega_max: f64,
) -> Result<SweepResult, Error> {
    check_points(points)?;
    if n_steps < 3 {
        return Err(Error::TooFewSteps { n_steps, min: 3 });
    }
    let times = time_grid(t_range, points)?;
    let payload = times
        .par_iter()
        .map(|&t| {
            cell_protocol(scheme, timing, n_steps, t, omega_max).map(|p| transfer_fidelity(&p))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let result = SweepResult {
        axes: vec![
            Axis { name: "N".into(), values: vec![n_steps as f64] },
            Axis { name: "t_max".into(), values: times },
        ],
        payload,
        payload_kind: PayloadKind::Fidelity,
        metadata: SweepMetadata::new(scheme, timing, omega_max),
        overlay: None,
    };
    result.validate()?;
    Ok(result)
}

/// Transport error 1 − P₃ over the (N, t_max) grid, N-major.
pub fn sweep_grid(
    scheme: Scheme,
    timing: Timing,
    n_range: (usize, usize),
    t_range: (f64, f64),
    points: usize,
    omega_max: f64,
) -> Result<SweepResult, Error> {
    check_points(points)?;
    check_n_range(n_range)?;
    let times = time_grid(t_range, points)?;
    let ns: Vec<usize> = (n_range.0..=n_range.1).collect();
    let cells: Vec<(usize, f64)> = ns
        .iter()
        .flat_map(|&n| times.iter().map(move |&t| (n, t)))
        .collect();
    let payload = cells
        .par_iter()
        .map(|&(n, t)| {
            cell_protocol(scheme, timing, n, t, omega_max)
                .map(|p| 1.0 - transfer_fidelity(&p))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let result = SweepResult {
        axes: vec![
            Axis { name: "N".into(), values: ns.iter().map(|&n| n as f64).collect() },
            Axis { name: "t_max".into(), values: times },
        ],
        payload,
        payload_kind: PayloadKind::Error,
        metadata: SweepMetadata::new(scheme, timing, omega_max),
        overlay: None,
    };
    result.validate()?;
    Ok(result)
}

/// Transport error versus step count at fixed total times (uniform timing),
/// with the analytic η_T(N) overlay aligned to the N axis.
pub fn error_vs_n(
    scheme: Scheme,
    t_max_list: &[f64],
    n_range: (usize, usize),
    omega_max: f64,
) -> Result<SweepResult, Error> {
    if t_max_list.is_empty() {
        return Err(Error::BadResolution { points: 0 });
    }
    for &t in t_max_list {
        if t <= 0.0 || !t.is_finite() {
            return Err(Error::NonPositiveTime { t_max: t });
        }
    }
    check_n_range(n_range)?;
    let ns: Vec<usize> = (n_range.0..=n_range.1).collect();
    let cells: Vec<(usize, f64)> = ns
        .iter()
        .flat_map(|&n| t_max_list.iter().map(move |&t| (n, t)))
        .collect();
    let payload = cells
        .par_iter()
        .map(|&(n, t)| {
            build_protocol(scheme, n, t, omega_max, Timing::Uniform)
                .map(|p| 1.0 - transfer_fidelity(&p))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let overlay_values = ns
        .iter()
        .map(|&n| total_error_estimate(n).map(|e| e.eta_total))
        .collect::<Result<Vec<_>, _>>()?;
    let result = SweepResult {
        axes: vec![
            Axis { name: "N".into(), values: ns.iter().map(|&n| n as f64).collect() },
            Axis { name: "t_max".into(), values: t_max_list.to_vec() },
        ],
        payload,
        payload_kind: PayloadKind::Error,
        metadata: SweepMetadata::new(scheme, Timing::Uniform, omega_max),
        overlay: Some(Axis { name: "eta_total".into(), values: overlay_values }),
    };
    result.validate()?;
    Ok(result)
}

/// t_max values of a single-N fidelity sweep whose fidelity falls below
/// `threshold` — the detected identity resonances.
pub fn detect_nulls(result: &SweepResult, threshold: f64) -> Vec<f64> {
    result
        .rows()
        .filter(|row| row.fidelity < threshold)
        .map(|row| row.t_max)
        .collect()
}
