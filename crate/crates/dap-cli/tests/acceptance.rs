//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the measured margin (run with `--nocapture` to see them).
//!
//! Run: cargo test -p dap-cli --test acceptance -- --nocapture

use std::f64::consts::PI;
use std::process::Command;

use dap::analysis::{
    adiabaticity_linear, adiabaticity_sincos, dark_state_deficit, resonance_times,
    step_overlap_error, total_error_estimate,
};
use dap::experiments::{detect_nulls, sweep_tmax};
use dap::propagator::{compose, evolve_trajectory, expm_oracle, step_unitary, transfer_fidelity};
use dap::schemes::{
    build_protocol, continuous_couplings, continuous_rates, digital_couplings, digital_gap,
};
use dap::{CouplingPair, Scheme, StateVector, Timing};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criterion 1: uniform sin/cos protocols at t_max = 2nNπ/Ω_M compose to
/// the identity within 1e-10.
#[test]
fn criterion_01_identity_resonances() {
    let mut worst: f64 = 0.0;
    for (n, order) in [(5usize, 1u32), (15, 1), (45, 1), (5, 2), (7, 3)] {
        let t_max = 2.0 * order as f64 * n as f64 * PI;
        let p = build_protocol(Scheme::SinCos, n, t_max, 1.0, Timing::Uniform).unwrap();
        let deviation = compose(&p).max_deviation_from_identity();
        assert!(deviation < 1e-10, "N={n}, n={order}: deviation {deviation}");
        worst = worst.max(deviation);
    }
    println!("criterion 01 identity-resonances: PASS (worst deviation {worst:.2e} < 1e-10)");
}

/// Criterion 2: uniform sin/cos with odd N at t_max = Nπ/Ω_M transfers
/// exactly, fidelity 1 within 1e-10.
#[test]
fn criterion_02_exact_odd_n_transfer() {
    let mut worst: f64 = 0.0;
    for n in [5usize, 15, 45] {
        let p = build_protocol(Scheme::SinCos, n, n as f64 * PI, 1.0, Timing::Uniform).unwrap();
        let miss = (transfer_fidelity(&p) - 1.0).abs();
        assert!(miss < 1e-10, "N={n}: fidelity misses 1 by {miss}");
        worst = worst.max(miss);
    }
    println!("criterion 02 exact-odd-N-transfer: PASS (worst |F-1| {worst:.2e} < 1e-10)");
}

/// Criterion 3: compensated linear protocols (N = 7, 45) transfer exactly,
/// and their transient |2⟩ population peak is strictly below the
/// uniform-timing run at matched total time.
#[test]
fn criterion_03_compensated_complete_transfer() {
    for n in [7usize, 45] {
        let compensated =
            build_protocol(Scheme::Linear, n, 0.0, 1.0, Timing::Compensated).unwrap();
        let miss = (transfer_fidelity(&compensated) - 1.0).abs();
        assert!(miss < 1e-10, "N={n}: compensated fidelity misses 1 by {miss}");

        let uniform =
            build_protocol(Scheme::Linear, n, compensated.total_time(), 1.0, Timing::Uniform)
                .unwrap();
        let initial = StateVector::basis(0);
        let peak_comp = evolve_trajectory(&compensated, &initial, 64)
            .unwrap()
            .max_population(1);
        let peak_unif = evolve_trajectory(&uniform, &initial, 64)
            .unwrap()
            .max_population(1);
        assert!(
            peak_comp < peak_unif,
            "N={n}: compensated peak P2 {peak_comp} not below uniform {peak_unif}"
        );
        println!(
            "criterion 03 compensated-complete-transfer: PASS \
             (N={n}: |F-1| {miss:.2e} < 1e-10, peak P2 {peak_comp:.4e} < {peak_unif:.4e})"
        );
    }
}

/// Criterion 4: closed-form step unitary matches the Taylor expm oracle on
/// 1000 random draws to 1e-12 per entry, and unitarity drift stays below
/// N·1e-14 after composing up to 1000 steps.
#[test]
fn criterion_04_oracle_equivalence_and_unitarity() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst_dev: f64 = 0.0;
    for _ in 0..1000 {
        let c = CouplingPair::new(rng.gen_range(0.0..=1.0), rng.gen_range(0.0..=1.0)).unwrap();
        let tau = rng.gen_range(0.0..=20.0);
        let dev = step_unitary(c, tau).unwrap().max_abs_diff(&expm_oracle(c, tau));
        assert!(dev < 1e-12, "({}, {}, {tau}): deviation {dev}", c.omega1(), c.omega2());
        worst_dev = worst_dev.max(dev);
    }

    let mut worst_ratio: f64 = 0.0;
    for n in [10usize, 100, 1000] {
        let p = build_protocol(Scheme::Linear, n, 137.0, 1.0, Timing::Uniform).unwrap();
        let defect = compose(&p).unitarity_defect();
        assert!(defect < n as f64 * 1e-14, "N={n}: defect {defect}");
        worst_ratio = worst_ratio.max(defect / (n as f64 * 1e-14));
    }
    println!(
        "criterion 04 oracle-equivalence: PASS \
         (worst entry dev {worst_dev:.2e} < 1e-12; worst defect at {:.0}% of N*1e-14)",
        worst_ratio * 100.0
    );
}

/// Criterion 5: the general adiabaticity formula reproduces both closed
/// forms at 100 random points to 1e-12 relative; the sin/cos value is
/// t-independent; the linear peak sits at the midpoint with value
/// 2/(t_max Ω_M).
#[test]
fn criterion_05_analytic_adiabaticity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (t_max, omega_max) = (23.0, 0.9);
    let sincos_expected = adiabaticity_sincos(t_max, omega_max);
    let mut worst_rel: f64 = 0.0;
    let (mut sincos_min, mut sincos_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..100 {
        let t = rng.gen_range(0.0..=t_max);
        for scheme in [Scheme::SinCos, Scheme::Linear] {
            let c = continuous_couplings(scheme, t, t_max, omega_max).unwrap();
            let dc = continuous_rates(scheme, t, t_max, omega_max).unwrap();
            let general = dap::analysis::adiabaticity_general(c, dc).unwrap();
            let closed = match scheme {
                Scheme::SinCos => sincos_expected,
                Scheme::Linear => adiabaticity_linear(t, t_max, omega_max),
            };
            let rel = (general - closed).abs() / closed;
            assert!(rel < 1e-12, "{scheme} at t={t}: relative error {rel}");
            worst_rel = worst_rel.max(rel);
            if scheme == Scheme::SinCos {
                sincos_min = sincos_min.min(general);
                sincos_max = sincos_max.max(general);
            }
        }
    }
    // The sin/cos value is t-independent to machine precision.
    let spread = (sincos_max - sincos_min) / sincos_expected;
    assert!(spread < 1e-13, "sin/cos adiabaticity varies by {spread} over t");
    let peak = adiabaticity_linear(t_max / 2.0, t_max, omega_max);
    let peak_rel = (peak - 2.0 / (t_max * omega_max)).abs() / peak;
    assert!(peak_rel < 1e-14, "linear peak off by {peak_rel}");
    println!(
        "criterion 05 analytic-adiabaticity: PASS \
         (worst closed-form mismatch {worst_rel:.2e} < 1e-12; sin/cos spread {spread:.2e}; \
         linear peak 2/(t_max*Omega_M))"
    );
}

/// Criterion 6: the numerically computed consecutive dark-state deficit
/// equals sin²(π/2(N−1)) to 1e-13 for every step and N ∈ {3,…,64}, and
/// η_T(45) agrees with π²/180 within 5%.
#[test]
fn criterion_06_overlap_error_analytics() {
    let mut worst: f64 = 0.0;
    for n in 3..=64usize {
        let eta = step_overlap_error(n).unwrap();
        for xi in 0..n - 1 {
            let numeric = dark_state_deficit(
                digital_couplings(xi, n, 1.0, Scheme::SinCos).unwrap(),
                digital_couplings(xi + 1, n, 1.0, Scheme::SinCos).unwrap(),
            )
            .unwrap();
            let dev = (numeric - eta).abs();
            assert!(dev < 1e-13, "N={n}, xi={xi}: deficit off by {dev}");
            worst = worst.max(dev);
        }
    }
    let estimate = total_error_estimate(45).unwrap();
    let ratio = estimate.eta_total / estimate.eta_asymptotic;
    assert!((ratio - 1.0).abs() < 0.05, "eta_T(45)/asymptote = {ratio}");
    println!(
        "criterion 06 overlap-error-analytics: PASS \
         (worst deficit dev {worst:.2e} < 1e-13; eta_T(45)={:.6} vs pi^2/180={:.6}, {:.2}% apart)",
        estimate.eta_total,
        estimate.eta_asymptotic,
        (ratio - 1.0).abs() * 100.0
    );
}

/// Criterion 7: detected fidelity nulls (threshold 1e-6) coincide with
/// t_max = 2nNπ/Ω_M within one grid cell for N ∈ {3,…,10}, with no
/// spurious nulls for odd N.
#[test]
fn criterion_07_resonance_spacing() {
    // 400 points over (0, 40π] put every resonance exactly on the grid.
    let points = 400;
    let cell = 40.0 * PI / points as f64;
    for n in 3..=10usize {
        let sweep = sweep_tmax(
            Scheme::SinCos,
            Timing::Uniform,
            n,
            (0.0, 40.0 * PI),
            points,
            1.0,
        )
        .unwrap();
        let nulls = detect_nulls(&sweep, 1e-6);
        let resonances = resonance_times(n, 1.0, (20 / n) as u32).unwrap();
        for r in &resonances.times {
            assert!(
                nulls.iter().any(|t| (t - r).abs() <= cell),
                "N={n}: resonance at {r} undetected"
            );
        }
        for t in &nulls {
            assert!(
                resonances.times.iter().any(|r| (t - r).abs() <= cell),
                "N={n}: null at {t} is not a resonance"
            );
        }
        if n % 2 == 1 {
            assert_eq!(
                nulls.len(),
                resonances.times.len(),
                "N={n}: spurious nulls for odd N"
            );
        }
    }
    println!(
        "criterion 07 resonance-spacing: PASS \
         (all nulls within one cell of 2nN\u{3c0}, none spurious for odd N)"
    );
}

/// Criterion 8: every sin/cos step has gap exactly Ω_M; the linear scheme's
/// minimum gap is Ω_M/√2 at the midpoint.
#[test]
fn criterion_08_eigenenergy_constancy() {
    for n in 3..=64usize {
        for xi in 0..n {
            let gap = digital_gap(Scheme::SinCos, xi, n, 0.7).unwrap();
            assert_eq!(gap, 0.7, "N={n}, xi={xi}: sin/cos gap not exactly Omega_M");
        }
        let min_gap = (0..n)
            .map(|xi| digital_gap(Scheme::Linear, xi, n, 1.0).unwrap())
            .fold(f64::INFINITY, f64::min);
        if n % 2 == 1 {
            assert_eq!(min_gap, 0.5f64.sqrt(), "N={n}: linear midpoint gap");
            assert_eq!(
                digital_gap(Scheme::Linear, n / 2, n, 1.0).unwrap(),
                min_gap,
                "N={n}: minimum not at the midpoint"
            );
        } else {
            assert!(min_gap >= 0.5f64.sqrt());
        }
    }
    println!(
        "criterion 08 eigenenergy-constancy: PASS \
         (sin/cos gap == Omega_M bit-exactly; linear minimum Omega_M/sqrt(2) at midpoint)"
    );
}

/// Criterion 9: transient |2⟩ population for sin/cos N = 45 at t_max = 45π
/// peaks within [η/4, 4η], η = sin²(π/88).
#[test]
fn criterion_09_transient_middle_population() {
    let p = build_protocol(Scheme::SinCos, 45, 45.0 * PI, 1.0, Timing::Uniform).unwrap();
    let traj = evolve_trajectory(&p, &StateVector::basis(0), 64).unwrap();
    let eta = (PI / 88.0).sin().powi(2);
    let peak = traj.max_population(1);
    assert!(
        peak > eta / 4.0 && peak < 4.0 * eta,
        "peak P2 {peak} outside [{}, {}]",
        eta / 4.0,
        4.0 * eta
    );
    println!(
        "criterion 09 transient-p2: PASS (peak P2 {peak:.4e} within [eta/4, 4*eta], eta={eta:.4e})"
    );
}

/// Criterion 10: repeated CLI runs produce byte-identical CSV and JSON, and
/// JSON read-back reproduces the in-memory result exactly.
#[test]
fn criterion_10_determinism_and_serialization() {
    let dir = tempfile::tempdir().unwrap();
    let run = |out: &str, format: &str| {
        let status = Command::new(env!("CARGO_BIN_EXE_dap"))
            .args([
                "sweep-grid",
                "--scheme",
                "linear",
                "--timing",
                "compensated",
                "--n-min",
                "3",
                "--n-max",
                "12",
                "--tmax-pi-max",
                "30",
                "--points",
                "60",
                "--format",
                format,
                "--out",
                out,
            ])
            .current_dir(dir.path())
            .env_remove("DAP_THREADS")
            .status()
            .expect("binary runs");
        assert!(status.success());
    };

    run("a.csv", "csv");
    run("b.csv", "csv");
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b, "CSV outputs differ between identical runs");

    run("a.json", "json");
    run("b.json", "json");
    let ja = std::fs::read(dir.path().join("a.json")).unwrap();
    let jb = std::fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(ja, jb, "JSON outputs differ between identical runs");

    // JSON read-back reproduces the library result exactly (modulo the
    // command echo, which only the CLI knows).
    let parsed: dap::experiments::SweepResult =
        serde_json::from_slice(&ja).expect("sweep JSON parses");
    let mut reference = dap::experiments::sweep_grid(
        Scheme::Linear,
        Timing::Compensated,
        (3, 12),
        (0.0, 30.0 * PI),
        60,
        1.0,
    )
    .unwrap();
    reference.metadata.command = parsed.metadata.command.clone();
    assert_eq!(parsed, reference, "JSON round-trip is not exact");

    // CSV fields parse back to the exact same floats the JSON carries.
    let text = String::from_utf8(a).unwrap();
    let first_row = text.lines().nth(1).unwrap();
    let fields: Vec<&str> = first_row.split(',').collect();
    let fidelity: f64 = fields[2].parse().unwrap();
    let expected = 1.0 - reference.payload[0];
    assert_eq!(fidelity.to_bits(), expected.to_bits(), "CSV float round-trip");

    println!(
        "criterion 10 determinism-serialization: PASS \
         (byte-identical reruns; exact JSON and CSV round-trips)"
    );
}
