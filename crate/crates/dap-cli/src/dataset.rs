//! Dataset serialization: locale-independent CSV and JSON writers.
//!
//! Floats are written with 17 significant digits ('.' decimal separator,
//! '\n' line endings), which round-trips every f64 exactly. Files are
//! replaced atomically (temp file + rename) so a crashed run never leaves a
//! truncated dataset behind.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use dap::experiments::SweepResult;
use dap::Trajectory;
use serde::{Deserialize, Serialize};

/// 17 significant digits: exact round-trip for every f64.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write `contents` to `path` atomically via a sibling temp file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut file = fs::File::create(&tmp)
            .with_context(|| format!("cannot create {}", tmp.display()))?;
        file.write_all(contents)
            .with_context(|| format!("cannot write {}", tmp.display()))?;
        file.sync_all().ok();
    }
    fs::rename(&tmp, path)
        .with_context(|| format!("cannot move dataset into place at {}", path.display()))
}

/// Trajectory CSV: `t,re1,im1,re2,im2,re3,im3,p1,p2,p3`, with `t` written
/// in units of 1/Ω_M (i.e. t·Ω_M).
pub fn trajectory_csv(traj: &Trajectory, omega_max: f64) -> String {
    let mut out = String::from("t,re1,im1,re2,im2,re3,im3,p1,p2,p3\n");
    for ((t, state), pops) in traj
        .times
        .iter()
        .zip(&traj.states)
        .zip(&traj.populations)
    {
        let mut fields = vec![format_f64(t * omega_max)];
        for i in 0..3 {
            let a = state.amplitude(i);
            fields.push(format_f64(a.re));
            fields.push(format_f64(a.im));
        }
        for p in pops {
            fields.push(format_f64(*p));
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct TrajectoryWire {
    omega_max: f64,
    times: Vec<f64>,
    /// Amplitudes as [re, im] pairs per basis state.
    states: Vec<[[f64; 2]; 3]>,
    populations: Vec<[f64; 3]>,
}

/// Trajectory JSON mirroring the in-memory record (times in absolute
/// units; `omega_max` is included for conversion).
pub fn trajectory_json(traj: &Trajectory, omega_max: f64) -> String {
    let wire = TrajectoryWire {
        omega_max,
        times: traj.times.clone(),
        states: traj
            .states
            .iter()
            .map(|s| {
                [0, 1, 2].map(|i| {
                    let a = s.amplitude(i);
                    [a.re, a.im]
                })
            })
            .collect(),
        populations: traj.populations.clone(),
    };
    let mut json = serde_json::to_string_pretty(&wire).expect("trajectory serializes");
    json.push('\n');
    json
}

/// Sweep CSV: header row with the axis names, then one row per cell
/// `N,t_max,fidelity,error[,<overlay>]`, N-major. `t_max` is written in
/// units of 1/Ω_M.
pub fn sweep_csv(result: &SweepResult) -> String {
    let mut header = format!("{},{},fidelity,error", result.axes[0].name, result.axes[1].name);
    if let Some(overlay) = &result.overlay {
        header.push(',');
        header.push_str(&overlay.name);
    }
    let mut out = header;
    out.push('\n');
    let omega_max = result.metadata.omega_max;
    for row in result.rows() {
        // The N axis is integral by construction.
        out.push_str(&format!(
            "{},{},{},{}",
            row.n_steps as u64,
            format_f64(row.t_max * omega_max),
            format_f64(row.fidelity),
            format_f64(row.error),
        ));
        if let Some(v) = row.overlay {
            out.push(',');
            out.push_str(&format_f64(v));
        }
        out.push('\n');
    }
    out
}

/// Pretty JSON for any serializable result, newline-terminated.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut json = serde_json::to_string_pretty(value).expect("dataset types serialize");
    json.push('\n');
    json
}
