//! Preset reference datasets behind `dap reproduce`.
//!
//! Each id maps to a fixed flag bundle (Ω_M = 1 throughout):
//!
//! - fig2a/fig2b: continuous and 15-step digital couplings (sin/cos, linear)
//! - fig2c/fig2d: eigenvalues along both schedules
//! - fig2e: adiabaticity · t_max for both continuous schedules
//! - fig3a-c: sin/cos uniform time series at N = 5/15/45, t_max = Nπ
//! - fig3d-f: the same N at t_max = 2Nπ (identity resonances)
//! - fig3g-i: population maps over (fractional time, t_max)
//! - fig4a/fig4b: fidelity vs t_max for N = 3,5,7,9 / 4,6,8,10
//! - fig5a/fig5b: (N, t_max) error grids, sin/cos and linear, uniform
//! - fig6: compensated linear protocol (N = 15) as JSON
//! - fig7a-d: linear N = 7/45 uniform vs compensated at matched total time
//! - fig8: (N, t_max) error grid for rescaled-compensated linear timing

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use dap::analysis::{adiabaticity_linear, adiabaticity_sincos};
use dap::core::eigensystem;
use dap::experiments::{sweep_grid, sweep_tmax, SweepResult};
use dap::schemes::{build_protocol, continuous_couplings, digital_couplings};
use dap::{Scheme, Timing};

use crate::{dataset, table_csv, trajectory_for, CliError, CliResult};

const PANELS: &[&str] = &[
    "fig2a", "fig2b", "fig2c", "fig2d", "fig2e", "fig3a", "fig3b", "fig3c", "fig3d", "fig3e",
    "fig3f", "fig3g", "fig3h", "fig3i", "fig4a", "fig4b", "fig5a", "fig5b", "fig6", "fig7a",
    "fig7b", "fig7c", "fig7d", "fig8",
];

fn expand(figure: &str) -> CliResult<Vec<&'static str>> {
    if figure == "all" {
        return Ok(PANELS.to_vec());
    }
    if PANELS.contains(&figure) {
        let idx = PANELS.iter().position(|p| *p == figure).unwrap();
        return Ok(vec![PANELS[idx]]);
    }
    let group: Vec<&'static str> = PANELS
        .iter()
        .filter(|p| p.strip_prefix(figure).is_some_and(|rest| rest.len() == 1))
        .copied()
        .collect();
    if !group.is_empty() && figure.starts_with("fig") {
        return Ok(group);
    }
    Err(CliError::Validation(format!(
        "unknown figure id '{figure}' (expected one of fig2..fig8, a panel like fig3b, or all)"
    )))
}

pub fn run(figure: &str, out_dir: &Path) -> CliResult<()> {
    fs::create_dir_all(out_dir).map_err(|e| {
        CliError::Runtime(anyhow::anyhow!("cannot create {}: {e}", out_dir.display()))
    })?;
    for id in expand(figure)? {
        emit(id, out_dir)?;
    }
    Ok(())
}

fn write(out_dir: &Path, name: &str, contents: &str) -> CliResult<()> {
    let path = out_dir.join(name);
    dataset::write_atomic(&path, contents.as_bytes())?;
    println!("wrote {}", path.display());
    Ok(())
}

fn write_sweep(out_dir: &Path, name: &str, mut result: SweepResult, id: &str) -> CliResult<()> {
    result.metadata.command = Some(format!("dap reproduce {id}"));
    write(out_dir, name, &dataset::sweep_csv(&result))
}

/// Fractional-time grid with both endpoints, digital level via ⌊N·u⌋
/// clamped to the last step at u = 1.
fn schedule_rows(f: impl Fn(f64, usize) -> Vec<f64>) -> Vec<Vec<f64>> {
    let n = 15usize;
    (0..=400)
        .map(|k| {
            let u = k as f64 / 400.0;
            let xi = ((n as f64 * u) as usize).min(n - 1);
            let mut row = vec![u];
            row.extend(f(u, xi));
            row
        })
        .collect()
}

fn couplings_table(scheme: Scheme) -> String {
    let rows = schedule_rows(|u, xi| {
        let cont = continuous_couplings(scheme, u, 1.0, 1.0).expect("u in [0, 1]");
        let dig = digital_couplings(xi, 15, 1.0, scheme).expect("xi in range");
        vec![cont.omega1(), cont.omega2(), dig.omega1(), dig.omega2()]
    });
    table_csv(
        &["t_frac", "omega1_cont", "omega2_cont", "omega1_dig", "omega2_dig"],
        &rows,
    )
}

fn eigenvalue_table(scheme: Scheme) -> String {
    let rows = schedule_rows(|u, xi| {
        let cont = eigensystem(continuous_couplings(scheme, u, 1.0, 1.0).expect("u in [0, 1]"))
            .expect("schedules never reach zero couplings");
        let dig = eigensystem(digital_couplings(xi, 15, 1.0, scheme).expect("xi in range"))
            .expect("digital levels never reach zero couplings");
        vec![cont.e_minus, cont.e_zero, cont.e_plus, dig.e_minus, dig.e_plus]
    });
    table_csv(
        &["t_frac", "e_minus_cont", "e_zero", "e_plus_cont", "e_minus_dig", "e_plus_dig"],
        &rows,
    )
}

fn adiabaticity_table() -> String {
    // Normalised by total time: A·t_max depends only on fractional time.
    let rows: Vec<Vec<f64>> = (0..=400)
        .map(|k| {
            let u = k as f64 / 400.0;
            vec![u, adiabaticity_sincos(1.0, 1.0), adiabaticity_linear(u, 1.0, 1.0)]
        })
        .collect();
    table_csv(
        &["t_frac", "adiabaticity_tmax_sincos", "adiabaticity_tmax_linear"],
        &rows,
    )
}

fn timeseries_csv(
    scheme: Scheme,
    timing: Timing,
    n: usize,
    t_max: f64,
    samples: usize,
) -> CliResult<String> {
    let protocol = build_protocol(scheme, n, t_max, 1.0, timing)?;
    let traj = trajectory_for(&protocol, samples)?;
    Ok(dataset::trajectory_csv(&traj, 1.0))
}

fn population_map_csv(n: usize) -> CliResult<String> {
    let points = 200usize;
    let upper = 4.0 * n as f64 * PI;
    let mut rows = Vec::new();
    for k in 1..=points {
        let t_max = k as f64 * upper / points as f64;
        let protocol = build_protocol(Scheme::SinCos, n, t_max, 1.0, Timing::Uniform)?;
        let traj = trajectory_for(&protocol, 8)?;
        for (t, pops) in traj.times.iter().zip(&traj.populations) {
            rows.push(vec![t_max, *t, pops[0], pops[1], pops[2]]);
        }
    }
    Ok(table_csv(&["t_max", "t", "p1", "p2", "p3"], &rows))
}

fn matched_time_pair(n: usize) -> CliResult<(String, String)> {
    let compensated = build_protocol(Scheme::Linear, n, 0.0, 1.0, Timing::Compensated)?;
    let matched = compensated.total_time();
    let uniform = build_protocol(Scheme::Linear, n, matched, 1.0, Timing::Uniform)?;
    let uniform_csv = dataset::trajectory_csv(&trajectory_for(&uniform, 64)?, 1.0);
    let compensated_csv = dataset::trajectory_csv(&trajectory_for(&compensated, 64)?, 1.0);
    Ok((uniform_csv, compensated_csv))
}

fn emit(id: &str, out_dir: &Path) -> CliResult<()> {
    match id {
        "fig2a" => write(out_dir, "fig2a_couplings_sincos_N15.csv", &couplings_table(Scheme::SinCos)),
        "fig2b" => write(out_dir, "fig2b_couplings_linear_N15.csv", &couplings_table(Scheme::Linear)),
        "fig2c" => write(out_dir, "fig2c_eigenvalues_sincos_N15.csv", &eigenvalue_table(Scheme::SinCos)),
        "fig2d" => write(out_dir, "fig2d_eigenvalues_linear_N15.csv", &eigenvalue_table(Scheme::Linear)),
        "fig2e" => write(out_dir, "fig2e_adiabaticity_normalized.csv", &adiabaticity_table()),
        "fig3a" | "fig3b" | "fig3c" | "fig3d" | "fig3e" | "fig3f" => {
            let (n, multiple) = match id {
                "fig3a" => (5, 1.0),
                "fig3b" => (15, 1.0),
                "fig3c" => (45, 1.0),
                "fig3d" => (5, 2.0),
                "fig3e" => (15, 2.0),
                _ => (45, 2.0),
            };
            let t_max = multiple * n as f64 * PI;
            let csv = timeseries_csv(Scheme::SinCos, Timing::Uniform, n, t_max, 64)?;
            let name = format!("{id}_timeseries_sincos_uniform_N{n}.csv");
            write(out_dir, &name, &csv)
        }
        "fig3g" | "fig3h" | "fig3i" => {
            let n = match id {
                "fig3g" => 5,
                "fig3h" => 15,
                _ => 45,
            };
            let name = format!("{id}_population_map_sincos_uniform_N{n}.csv");
            write(out_dir, &name, &population_map_csv(n)?)
        }
        "fig4a" | "fig4b" => {
            let ns: [usize; 4] = if id == "fig4a" { [3, 5, 7, 9] } else { [4, 6, 8, 10] };
            for n in ns {
                let result = sweep_tmax(
                    Scheme::SinCos,
                    Timing::Uniform,
                    n,
                    (0.0, 40.0 * PI),
                    2000,
                    1.0,
                )?;
                let name = format!("{id}_sweep_tmax_sincos_uniform_N{n}.csv");
                write_sweep(out_dir, &name, result, id)?;
            }
            Ok(())
        }
        "fig5a" | "fig5b" => {
            let scheme = if id == "fig5a" { Scheme::SinCos } else { Scheme::Linear };
            let result =
                sweep_grid(scheme, Timing::Uniform, (3, 50), (0.0, 120.0 * PI), 600, 1.0)?;
            let name = format!("{id}_sweep_grid_{scheme}_uniform_N3-50.csv");
            write_sweep(out_dir, &name, result, id)
        }
        "fig6" => {
            let protocol = build_protocol(Scheme::Linear, 15, 0.0, 1.0, Timing::Compensated)?;
            write(
                out_dir,
                "fig6_protocol_linear_compensated_N15.json",
                &dataset::to_json(&protocol),
            )
        }
        "fig7a" | "fig7b" | "fig7c" | "fig7d" => {
            let n = if id == "fig7a" || id == "fig7b" { 7 } else { 45 };
            let (uniform, compensated) = matched_time_pair(n)?;
            let (csv, timing) = if id == "fig7a" || id == "fig7c" {
                (uniform, "uniform")
            } else {
                (compensated, "compensated")
            };
            let name = format!("{id}_timeseries_linear_{timing}_N{n}.csv");
            write(out_dir, &name, &csv)
        }
        "fig8" => {
            let result = sweep_grid(
                Scheme::Linear,
                Timing::Compensated,
                (3, 50),
                (0.0, 120.0 * PI),
                600,
                1.0,
            )?;
            write_sweep(out_dir, "fig8_sweep_grid_linear_compensated_N3-50.csv", result, id)
        }
        other => Err(CliError::Validation(format!("unknown figure id '{other}'"))),
    }
}
